use std::io::Write;
use std::process::ExitCode;

use ayoneda_cli::commands::{execute, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let echo = argv.iter().skip(1).cloned().collect();
    match execute(&cli, echo) {
        Ok((doc, outcome)) => {
            let text = match (&outcome.raw, cli.opts.json) {
                (Some(raw), false) => raw.clone(),
                (_, true) => doc.to_json(),
                _ => doc.to_plain(),
            };
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            if outcome.verdict == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use serde::Serialize;
use serde_json::Value;

/// One report per run. Numbers are integers; rationals and field elements are strings.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub command: Vec<String>,
    pub results: Value,
    pub warnings: Vec<String>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are plain data");
        s.push('\n');
        s
    }

    /// `key: value` lines, nested keys joined with dots.
    pub fn to_plain(&self) -> String {
        let mut out = format!("command: {}\n", self.command.join(" "));
        flatten("", &self.results, &mut out);
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::String(s) if s.contains('\n') => {
            out.push_str(&format!("{prefix}:\n"));
            for line in s.lines() {
                out.push_str(&format!("  {line}\n"));
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

/// Serializes a value that is known to be plain data.
pub fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values are plain data")
}

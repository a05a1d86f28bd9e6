use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ayoneda::Error),
}

impl CliError {
    /// 1 for a mathematical precondition that does not hold, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                ayoneda::Error::Precondition(_)
                | ayoneda::Error::NotAdmissible(_)
                | ayoneda::Error::NonBasic(_)
                | ayoneda::Error::CapExceeded(_)
                | ayoneda::Error::DecompositionFailed(_) => 1,
                ayoneda::Error::Internal(_) => 1,
                _ => 2,
            },
            _ => 2,
        }
    }
}

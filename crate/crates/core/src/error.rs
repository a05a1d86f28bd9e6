use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("relation ideal is not admissible: {0}")]
    NotAdmissible(String),
    #[error("algebra is not basic: {0}")]
    NonBasic(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("decomposition did not converge within the retry budget ({0} attempts)")]
    DecompositionFailed(usize),
    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

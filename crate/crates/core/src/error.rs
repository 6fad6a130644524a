use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("generator order violates the antidiagonal block condition: {0}")]
    OrderConstraint(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse {
        offset: usize,
        message: String,
        expected: Vec<String>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

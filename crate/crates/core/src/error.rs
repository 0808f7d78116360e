use thiserror::Error;

/// Errors raised by matroid construction, search and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    DimensionOverflow { dim: usize, max: usize },

    #[error("{count} elements exceed the supported maximum of {max}")]
    TooManyElements { count: usize, max: usize },

    #[error("chosen columns are not a basis of the column space")]
    InvalidBasis,

    #[error("unknown element label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("label `{0}` occurs on both sides of a composition")]
    LabelCollision(String),

    #[error("invalid element label `{0}`")]
    InvalidLabel(String),

    #[error("matroid is not connected")]
    NotConnected,

    #[error("invalid tree decomposition: {0}")]
    InvalidTree(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("structural and theta-graph verdicts disagree: {0}")]
    Discrepancy(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

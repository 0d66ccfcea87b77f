use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: zero vector for word {word:?}")]
    ZeroVector {
        path: String,
        line: usize,
        word: String,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero-norm vector")]
    ZeroNorm,

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),

    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("insufficient data for {what}: need at least {needed}, got {got}")]
    Insufficient {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("exact permutation test needs equal set sizes, got {left} and {right}")]
    UnequalSizes { left: usize, right: usize },

    #[error(
        "exact permutation test infeasible: {partitions} partitions exceed the limit of {limit}"
    )]
    ExactInfeasible { partitions: u128, limit: u64 },

    #[error("{path}:{line}: score {score} outside scale [{min}, {max}]")]
    OutOfScale {
        path: String,
        line: usize,
        score: f64,
        min: f64,
        max: f64,
    },

    #[error("{path}: missing column {column}")]
    MissingColumn { path: String, column: String },

    #[error("unsupported language {0:?}")]
    UnsupportedLanguage(String),

    #[error("stimulus pack is missing category {0:?}")]
    MissingCategory(String),

    #[error("word not found: {0}")]
    WordNotFound(String),

    #[error("report carries no p-values")]
    NoPValues,

    #[error("slice {label}: {source}")]
    Slice {
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by the environment (unreadable files) as
    /// opposed to invalid data or arguments.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::Slice { source, .. } => source.is_io(),
            Error::Csv(e) => e.is_io_error(),
            Error::Json(e) => e.is_io(),
            _ => false,
        }
    }
}

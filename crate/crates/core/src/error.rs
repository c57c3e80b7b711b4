use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate item `{0}` in universe")]
    DuplicateItem(String),
    #[error("universe needs at least 2 items, got {0}")]
    UniverseTooSmall(usize),
    #[error("unknown item `{0}`")]
    UnknownItem(String),
    #[error("index {index} out of range for universe of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("invalid rank vector: {0}")]
    InvalidRankVector(String),
    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid prior: {0}")]
    InvalidPrior(String),
    #[error("invalid privacy budget: {0}")]
    InvalidBudget(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("output {0} has zero total mass under the prior; posterior undefined")]
    ZeroMassColumn(usize),
    #[error("calibration did not converge: {0}")]
    NonConvergence(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("de-noising matrix has Pr[y -> y] = 0 for item index {0}")]
    SingularDiagonal(usize),
    #[error("sequence of length {len} exceeds max_len {max_len}")]
    SequenceTooLong { len: usize, max_len: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

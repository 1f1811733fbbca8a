use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient sequence must be nonempty")]
    EmptySequence,
    #[error("non-finite entry {value} at index {index}")]
    NonFiniteEntry { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dense path refused: n = {n} exceeds cap {cap}")]
    DenseCapExceeded { n: usize, cap: usize },
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

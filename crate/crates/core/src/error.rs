use thiserror::Error;

/// Errors raised by the toolkit. Every variant except `Io` is structural:
/// the inputs violate a documented precondition.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("operands live on different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {value} out of range for Z_{modulus}")]
    CoordinateOutOfRange { value: i64, modulus: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("d not in {{1,2,3,7,11,19,43,67,163}}")]
    InadmissibleD(u32),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("orientation inconsistency: {0}")]
    OrientationInconsistency(String),
    #[error("boundary does not square to zero")]
    NotClosed,
    #[error("computation too large: {0}")]
    TooLarge(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

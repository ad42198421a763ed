//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration or arguments (bad dimensions, malformed flags).
    #[error("configuration error: {0}")]
    Config(String),

    /// A vector or batch had the wrong length for the receiving model.
    #[error("shape error: {0}")]
    Shape(String),

    /// A precondition of an operation was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The unbiased estimator is undefined on the given data
    /// (no negative-bag instances to normalise against).
    #[error("estimator undefined: {0}")]
    EstimatorUndefined(String),

    /// Gradient requested for a loss that has none (0-1 loss).
    #[error("unsupported gradient: {0}")]
    UnsupportedGradient(String),

    /// Training produced non-finite parameters and had to stop.
    #[error("numeric abort: {0}")]
    Numeric(String),

    /// Malformed input file (bad magic, truncation, ragged rows).
    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 usage/config, 3 contract, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Format(_) | Error::Io(_) | Error::Json(_) => 2,
            Error::Shape(_)
            | Error::Contract(_)
            | Error::EstimatorUndefined(_)
            | Error::UnsupportedGradient(_) => 3,
            Error::Numeric(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

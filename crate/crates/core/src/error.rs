use thiserror::Error;

/// Errors produced by the library.
///
/// `InvalidInput` and `DimensionMismatch` describe caller mistakes; every
/// other variant is a computational failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("representation failed verification: {0}")]
    Unverified(String),

    #[error("representation is reducible")]
    Reducible,

    #[error("tolerance failure: {0}")]
    Tolerance(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::Json(_)
        )
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

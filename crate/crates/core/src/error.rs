use thiserror::Error;

/// Errors produced by the library.
///
/// Variants are grouped so the CLI can map them onto stable exit codes:
/// malformed input, a guard (size cap) that refused to run, and internal
/// invariant failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{what} exceeds cap: search space {size} > cap {cap}")]
    CapExceeded { what: String, size: u128, cap: u128 },

    #[error("level {level} is too low (need at least {required})")]
    LevelTooLow { level: usize, required: usize },

    #[error("conditioning event has zero probability")]
    ZeroProbability,

    #[error("incompatible instances: {0}")]
    Incompatible(String),

    #[error("distribution is not normalized (total mass {0})")]
    NotNormalized(f64),

    #[error("empty support: {0}")]
    EmptySupport(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn cap(what: impl Into<String>, size: u128, cap: u128) -> Self {
        Error::CapExceeded {
            what: what.into(),
            size,
            cap,
        }
    }

    /// True for errors caused by a size guard rather than bad input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    /// True for errors that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

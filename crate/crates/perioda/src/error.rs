//! Error type shared across the crate.
//!
//! Variants are grouped by how the CLI maps them to exit codes: invalid
//! input (2), a legitimate falsification with witness (1), and internal or
//! theorem-violation errors (3).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    /// A verification that a proved theorem guarantees has failed; this
    /// indicates a bug, not a property of the inputs.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn theorem_violation(msg: impl Into<String>) -> Self {
        Error::TheoremViolation(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Process exit code for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::RankMismatch { .. } | Error::Json(_) | Error::Io(_) => {
                2
            }
            Error::Domain(_) => 2,
            Error::TheoremViolation(_) | Error::Internal(_) => 3,
        }
    }
}

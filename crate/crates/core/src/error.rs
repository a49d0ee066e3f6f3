//! Library error type.

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Elastic constants that do not form a positive-definite stiffness.
    #[error("inadmissible elastic constants: {0}")]
    Inadmissible(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("singular collocation matrix at k = {k} (pivot ratio {condition:e})")]
    SingularCollocation { k: f64, condition: f64 },

    #[error(
        "reference solution not converged at k = {k}: relative change {change:e} with {nodes} nodes"
    )]
    NotConverged { k: f64, nodes: usize, change: f64 },

    #[error("malformed field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

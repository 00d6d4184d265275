//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A construction parameter is out of its valid domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An input value violates an operation's preconditions.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The requested problem size exceeds a configured cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    /// A quantized objective value cannot be represented in the value register.
    #[error("value register overflow: {0}")]
    Overflow(String),
    /// A run configuration is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid_parameter(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn resource_limit(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }
}

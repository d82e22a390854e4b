//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A domain precondition or type invariant was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A linear solve or eigendecomposition failed.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An iterative procedure or basis truncation did not converge.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Configuration file could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

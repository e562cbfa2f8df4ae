use thiserror::Error;

/// Errors raised by the numerical routines and the experiment harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error("fit failure: {0}")]
    Fit(String),

    #[error("empty band: {0}")]
    EmptyBand(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("coefficient coupling violated: {0}")]
    Coupling(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Bad arguments: wrong grid, violated precondition, malformed input.
    #[error("usage error: {0}")]
    Usage(String),

    /// Parameters outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature did not reach the requested tolerance.
    #[error("accuracy error: achieved {achieved:e}, requested {requested:e}")]
    Accuracy { achieved: f64, requested: f64 },

    /// A functional failed (or returned a non-finite value) on one sample.
    #[error("evaluation failed on sample {index}: {reason}")]
    Eval { index: u64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

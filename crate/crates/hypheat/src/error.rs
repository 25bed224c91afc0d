//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by kernel evaluation, root finding and quadrature.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine could not reach the requested accuracy.
    /// `residual` is the best error estimate available at failure.
    #[error("accuracy error: {message} (residual estimate {residual:.3e})")]
    Accuracy { message: String, residual: f64 },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn accuracy(msg: impl Into<String>, residual: f64) -> Self {
        Error::Accuracy {
            message: msg.into(),
            residual,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

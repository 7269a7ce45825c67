//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical precondition on an input was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solver failed to reach its tolerance.
    #[error("convergence failure: {context} (last residual {residual:.3e})")]
    Convergence { context: String, residual: f64 },

    /// A quadrature or grid solver could not reach the requested accuracy.
    #[error("numerical error: {context} (achieved {achieved:.3e}, requested {requested:.3e})")]
    Numerical {
        context: String,
        achieved: f64,
        requested: f64,
    },

    /// A least-squares fit failed or produced unphysical output.
    #[error("fit error: {0}")]
    Fit(String),

    /// Malformed input data file.
    #[error("parse error in {path} line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Missing or invalid configuration entry.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn fit(msg: impl Into<String>) -> Self {
        Error::Fit(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

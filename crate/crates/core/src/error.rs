use thiserror::Error;

use crate::integrators::StageReport;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The implicit stage equations did not converge.
    #[error(
        "stage fixed point did not converge after {} iterations (residual {:e})",
        .0.iterations,
        .0.residual
    )]
    NonConvergence(StageReport),

    /// The Hermitian eigensolver failed to reduce the matrix.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_norm:e})")]
    Eigen { sweeps: usize, off_norm: f64 },

    /// Invalid run configuration.
    #[error("config error at line {line}: key `{key}`: {message}")]
    Config { key: String, line: usize, message: String },

    /// Malformed data file (snapshots, manifests).
    #[error("format error in {what}: {message}")]
    Format { what: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn format(what: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            what: what.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

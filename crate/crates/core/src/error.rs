use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model parameter violates its domain (non-positive time constant, negative droop, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A non-finite value reached a model input.
    #[error("non-finite input to {0}")]
    NonFinite(String),

    /// Configuration is inconsistent or references unknown entities.
    #[error("configuration error: {0}")]
    Config(String),

    /// A state variable left the finite range during a run.
    #[error("numerical divergence at t = {time} s in `{variable}`")]
    Divergence { time: f64, variable: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{}: malformed time series: {reason}", path.display())]
    Format { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end: 1 for configuration
    /// and I/O problems, 2 for numerical divergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Divergence { .. } | Error::NonFinite(_) => 2,
            _ => 1,
        }
    }
}

pub(crate) fn ensure_finite(value: f64, what: &str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A receiver sits (numerically) on top of an antenna; the near-field
    /// model diverges there.
    #[error("degenerate geometry: antenna-to-receiver distance {distance:e} m is below the 1e-6 m guard")]
    DegenerateGeometry { distance: f64 },

    #[error("invalid scenario: {field}: {reason}")]
    InvalidScenario { field: String, reason: String },

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("LP solver numerical failure: {0}")]
    LpNumerical(String),

    #[error("LP is unbounded")]
    LpUnbounded,

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn scenario(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidScenario {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by bad inputs rather than by a solver.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidScenario { .. }
                | Error::InvalidLayout(_)
                | Error::InvalidConfig(_)
                | Error::Parse { .. }
                | Error::Io { .. }
                | Error::DegenerateGeometry { .. }
        )
    }
}

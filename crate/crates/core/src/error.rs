use thiserror::Error;

use crate::sim::SimLog;

/// Errors raised while building or validating a configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid value for `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("incompatible configuration: {0}")]
    Incompatible(String),
}

impl ConfigError {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

/// Errors raised by a closed-loop run.
#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// The integrator produced a non-finite state. The log up to the
    /// divergence is kept so that it can still be written out.
    #[error("simulation diverged at t = {t:.6} s ({detail})")]
    Diverged {
        t: f64,
        detail: String,
        partial: Box<SimLog>,
    },
}

/// Errors from the scenario front end.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {source}")]
    Validation {
        path: String,
        #[source]
        source: ConfigError,
    },
    #[error("unknown scenario `{0}`")]
    Unknown(String),
    #[error("duplicate scenario name `{name}` ({path})")]
    Duplicate { name: String, path: String },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = ConfigError> = std::result::Result<T, E>;

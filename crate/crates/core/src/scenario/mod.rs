//! Scenario files, the built-in registry and the run-to-disk helpers used by
//! the command-line front end.

mod registry;
mod runner;
mod spec;
pub mod svg;

use std::path::Path;

pub use registry::{Origin, Registry, RegistryEntry, BUILTIN};
pub use runner::{run_all, run_to_dir, summary_table, write_outputs, RunOutcome, RunSummary};
pub use spec::{ControllerSpec, ErrorOrientation, EstimatorSpec, PiForm, ScenarioSpec, DEFAULT_DELTA, MAX_CFL};

use crate::error::ScenarioError;

/// Parses and validates a scenario from TOML text. `origin` only labels
/// error messages.
pub fn parse_scenario(text: &str, origin: &str) -> Result<ScenarioSpec, ScenarioError> {
    let spec: ScenarioSpec = toml::from_str(text).map_err(|e| ScenarioError::Parse {
        path: origin.to_string(),
        message: e.to_string(),
    })?;
    spec.validate().map_err(|source| ScenarioError::Validation {
        path: origin.to_string(),
        source,
    })?;
    Ok(spec)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioSpec, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text, &path.display().to_string())
}

pub fn to_toml(spec: &ScenarioSpec) -> String {
    toml::to_string(spec).expect("scenario specs always serialize")
}

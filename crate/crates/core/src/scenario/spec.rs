use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, Result};
use crate::plants::PlantSpec;
use crate::sim::{IntegratorSpec, NoiseSpec};
use crate::trajectory::Reference;
use crate::ultra_local::{IntelligentGains, UltraLocalModel};

/// Largest Courant number accepted for the exchanger discretization.
pub const MAX_CFL: f64 = 0.5;

/// Default estimator window, in seconds.
pub const DEFAULT_DELTA: f64 = 0.05;

/// Which way round the error fed to a classic controller is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorOrientation {
    /// `y* - y`, negative feedback for positive-gain plants.
    #[default]
    ReferenceMinusOutput,
    /// `y - y*`, the convention of the intelligent controllers.
    OutputMinusReference,
}

impl ErrorOrientation {
    /// Maps the tracking error `y - y*` to the controller's error.
    pub fn apply(self, e: f64) -> f64 {
        match self {
            ErrorOrientation::ReferenceMinusOutput => -e,
            ErrorOrientation::OutputMinusReference => e,
        }
    }

    fn is_default(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PiForm {
    #[default]
    Velocity,
    Positional,
}

impl PiForm {
    fn is_default(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ControllerSpec {
    Ip {
        alpha: f64,
        k_p: f64,
    },
    Ipi {
        alpha: f64,
        k_p: f64,
        k_i: f64,
    },
    Pi {
        k_p: f64,
        k_i: f64,
        #[serde(default, skip_serializing_if = "PiForm::is_default")]
        form: PiForm,
        #[serde(default, skip_serializing_if = "ErrorOrientation::is_default")]
        error: ErrorOrientation,
    },
    Pid {
        k_p: f64,
        k_i: f64,
        k_d: f64,
        #[serde(default)]
        rate_feedforward: bool,
        #[serde(default, skip_serializing_if = "ErrorOrientation::is_default")]
        error: ErrorOrientation,
    },
    /// Flatness-based nominal input of the restricted mass-spring model alone.
    OpenLoopFlat,
    /// Nominal input plus an iPI correction, `u = u* + du`.
    FlatIpi {
        alpha: f64,
        k_p: f64,
        k_i: f64,
    },
}

impl ControllerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ControllerSpec::Ip { .. } => "ip",
            ControllerSpec::Ipi { .. } => "ipi",
            ControllerSpec::Pi { .. } => "pi",
            ControllerSpec::Pid { .. } => "pid",
            ControllerSpec::OpenLoopFlat => "open_loop_flat",
            ControllerSpec::FlatIpi { .. } => "flat_ipi",
        }
    }

    /// `(alpha, gains)` for the controllers built on the ultra-local model.
    pub fn intelligent(&self) -> Option<(f64, IntelligentGains)> {
        match *self {
            ControllerSpec::Ip { alpha, k_p } => Some((alpha, IntelligentGains::proportional(k_p))),
            ControllerSpec::Ipi { alpha, k_p, k_i } | ControllerSpec::FlatIpi { alpha, k_p, k_i } => {
                Some((alpha, IntelligentGains::new(k_p, k_i)))
            }
            _ => None,
        }
    }

    pub fn uses_feedforward(&self) -> bool {
        matches!(self, ControllerSpec::OpenLoopFlat | ControllerSpec::FlatIpi { .. })
    }

    pub fn validate(&self) -> Result<()> {
        if let Some((alpha, gains)) = self.intelligent() {
            UltraLocalModel::new(alpha).map_err(|e| prefix(e, "controller"))?;
            gains.validate().map_err(|e| prefix(e, "controller"))?;
        }
        match *self {
            ControllerSpec::Pi { k_p, k_i, .. } => finite_gains(&[("k_p", k_p), ("k_i", k_i)]),
            ControllerSpec::Pid { k_p, k_i, k_d, .. } => finite_gains(&[("k_p", k_p), ("k_i", k_i), ("k_d", k_d)]),
            _ => Ok(()),
        }
    }
}

fn finite_gains(gains: &[(&str, f64)]) -> Result<()> {
    for (name, v) in gains {
        if !v.is_finite() {
            return Err(ConfigError::invalid(format!("controller.{name}"), "must be finite"));
        }
    }
    Ok(())
}

fn prefix(e: ConfigError, section: &str) -> ConfigError {
    match e {
        ConfigError::Invalid { field, reason } => ConfigError::Invalid {
            field: format!("{section}.{field}"),
            reason,
        },
        other => other,
    }
}

/// How the lumped term `F` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorSpec {
    /// Moving window of length `delta` seconds.
    Window { delta: f64 },
    /// `y'(t) - alpha u(t - h)` with a backward-difference `y'`.
    Shifted,
    /// The plant's true `F`, for reference runs.
    Oracle,
}

impl Default for EstimatorSpec {
    fn default() -> Self {
        EstimatorSpec::Window { delta: DEFAULT_DELTA }
    }
}

/// A complete closed-loop experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(default)]
    pub description: String,
    /// Simulated time, in seconds.
    pub horizon: f64,
    pub plant: PlantSpec,
    pub controller: ControllerSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimator: Option<EstimatorSpec>,
    pub reference: Reference,
    #[serde(default)]
    pub noise: NoiseSpec,
    pub integrator: IntegratorSpec,
}

impl ScenarioSpec {
    /// The estimator in effect, `None` for controllers that do not use one.
    pub fn effective_estimator(&self) -> Option<EstimatorSpec> {
        self.controller
            .intelligent()
            .map(|_| self.estimator.unwrap_or_default())
    }

    pub fn control_period(&self) -> f64 {
        self.integrator.control_period()
    }

    /// Number of logged control periods.
    pub fn periods(&self) -> usize {
        (self.horizon / self.control_period() - 1e-9).ceil() as usize
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.noise.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(ConfigError::invalid("name", "must not be empty"));
        }
        if !self
            .name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(ConfigError::invalid(
                "name",
                "only ASCII letters, digits, '_' and '-' are allowed",
            ));
        }
        self.integrator.validate()?;
        let h = self.control_period();
        if !(self.horizon.is_finite() && self.horizon >= h) {
            return Err(ConfigError::invalid(
                "horizon",
                format!("must be at least one control period ({h} s), got {}", self.horizon),
            ));
        }
        self.plant.validate()?;
        self.controller.validate()?;
        self.reference.validate()?;
        self.noise.validate()?;

        match (&self.estimator, self.controller.intelligent()) {
            (Some(_), None) => {
                return Err(ConfigError::Incompatible(format!(
                    "controller `{}` does not use an estimator",
                    self.controller.name()
                )))
            }
            (Some(EstimatorSpec::Window { delta }), Some(_)) => {
                if !(delta.is_finite() && *delta > 0.0) {
                    return Err(ConfigError::invalid("estimator.delta", "must be > 0"));
                }
                if *delta < h * (1.0 - 1e-9) {
                    return Err(ConfigError::invalid(
                        "estimator.delta",
                        format!("window {delta} s is shorter than the control period {h} s"),
                    ));
                }
            }
            _ => {}
        }

        if self.controller.uses_feedforward() && !matches!(self.plant, PlantSpec::MassSpring(_)) {
            return Err(ConfigError::Incompatible(format!(
                "controller `{}` needs the mass_spring plant, got `{}`",
                self.controller.name(),
                self.plant.name()
            )));
        }
        if let PlantSpec::HeatExchanger(p) = &self.plant {
            let cfl = p.cfl(self.integrator.dt);
            if cfl > MAX_CFL {
                return Err(ConfigError::invalid(
                    "integrator.dt",
                    format!("Courant number {cfl:.3} exceeds {MAX_CFL}; reduce dt"),
                ));
            }
        }
        Ok(())
    }
}

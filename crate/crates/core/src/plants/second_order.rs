use serde::{Deserialize, Serialize};

use super::Plant;
use crate::error::{ConfigError, Result};

/// Damped oscillator `x'' + c x' + 4 x = u`; `c = 0` is the harmonic case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecondOrderPlant {
    pub c: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub xdot0: f64,
}

pub const STIFFNESS: f64 = 4.0;

impl SecondOrderPlant {
    pub fn new(c: f64) -> Self {
        Self { c, x0: 0.0, xdot0: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c >= 0.0) {
            return Err(ConfigError::invalid(
                "plant.c",
                format!("must be finite and >= 0, got {}", self.c),
            ));
        }
        if !(self.x0.is_finite() && self.xdot0.is_finite()) {
            return Err(ConfigError::invalid("plant.x0", "initial state must be finite"));
        }
        Ok(())
    }
}

/// Returns `(x', x'')`.
pub fn second_order_derivs(plant: &SecondOrderPlant, x: f64, xdot: f64, u: f64) -> (f64, f64) {
    (xdot, u - plant.c * xdot - STIFFNESS * x)
}

impl Plant for SecondOrderPlant {
    fn state_dim(&self) -> usize {
        2
    }

    fn initial_state(&self) -> Vec<f64> {
        vec![self.x0, self.xdot0]
    }

    fn derivatives(&self, _t: f64, x: &[f64], u: f64, dx: &mut [f64]) {
        let (v, a) = second_order_derivs(self, x[0], x[1], u);
        dx[0] = v;
        dx[1] = a;
    }

    fn output(&self, x: &[f64]) -> f64 {
        x[0]
    }

    fn output_rate(&self, _t: f64, x: &[f64], _u: f64) -> f64 {
        x[1]
    }

    fn extra_columns(&self) -> Vec<&'static str> {
        vec!["xdot"]
    }

    fn extra_values(&self, _t: f64, x: &[f64], _u: f64, out: &mut Vec<f64>) {
        out.push(x[1]);
    }
}

use serde::{Deserialize, Serialize};

use super::Plant;
use crate::error::{ConfigError, Result};

/// Synthetic plant `y' = F(t) + gain * u` with a piecewise-constant `F`.
///
/// `disturbance` lists `[t_start, value]` pairs in increasing time; `F` is
/// zero before the first entry. The value is held over each integration
/// step, sampled at the step start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorPlant {
    #[serde(default = "one")]
    pub gain: f64,
    #[serde(default)]
    pub y0: f64,
    #[serde(default)]
    pub disturbance: Vec<[f64; 2]>,
    #[serde(skip)]
    held: f64,
}

fn one() -> f64 {
    1.0
}

impl IntegratorPlant {
    pub fn new(gain: f64, y0: f64, disturbance: Vec<[f64; 2]>) -> Self {
        let mut p = Self {
            gain,
            y0,
            disturbance,
            held: 0.0,
        };
        p.held = p.disturbance_at(0.0);
        p
    }

    pub fn disturbance_at(&self, t: f64) -> f64 {
        self.disturbance
            .iter()
            .take_while(|[start, _]| *start <= t)
            .last()
            .map_or(0.0, |[_, v]| *v)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gain.is_finite() && self.gain != 0.0) {
            return Err(ConfigError::invalid("plant.gain", "must be finite and nonzero"));
        }
        if !self.y0.is_finite() {
            return Err(ConfigError::invalid("plant.y0", "must be finite"));
        }
        if self.disturbance.iter().flatten().any(|v| !v.is_finite()) {
            return Err(ConfigError::invalid("plant.disturbance", "entries must be finite"));
        }
        if self.disturbance.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(ConfigError::invalid("plant.disturbance", "start times must increase"));
        }
        Ok(())
    }
}

impl Plant for IntegratorPlant {
    fn state_dim(&self) -> usize {
        1
    }

    fn initial_state(&self) -> Vec<f64> {
        vec![self.y0]
    }

    fn derivatives(&self, _t: f64, _x: &[f64], u: f64, dx: &mut [f64]) {
        dx[0] = self.held + self.gain * u;
    }

    fn output(&self, x: &[f64]) -> f64 {
        x[0]
    }

    fn output_rate(&self, t: f64, _x: &[f64], u: f64) -> f64 {
        self.disturbance_at(t) + self.gain * u
    }

    fn extra_columns(&self) -> Vec<&'static str> {
        vec!["f_true"]
    }

    fn extra_values(&self, t: f64, _x: &[f64], _u: f64, out: &mut Vec<f64>) {
        out.push(self.disturbance_at(t));
    }

    fn begin_step(&mut self, t: f64) {
        self.held = self.disturbance_at(t);
    }

    fn reset(&mut self) {
        self.held = self.disturbance_at(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_constant_schedule() {
        let p = IntegratorPlant::new(1.0, 0.0, vec![[0.0, 3.0], [1.0, -2.0]]);
        assert_eq!(p.disturbance_at(-1.0), 0.0);
        assert_eq!(p.disturbance_at(0.5), 3.0);
        assert_eq!(p.disturbance_at(1.0), -2.0);
        assert!(p.validate().is_ok());
        assert!(IntegratorPlant::new(1.0, 0.0, vec![[1.0, 3.0], [1.0, -2.0]])
            .validate()
            .is_err());
        assert!(IntegratorPlant::new(0.0, 0.0, vec![]).validate().is_err());
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExplicitEuler,
    #[default]
    Rk4,
}

/// Fixed-step integration settings. The control is recomputed every
/// `control_period` and held over the `control_period / dt` plant steps in
/// between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    #[serde(default)]
    pub method: Method,
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control_period: Option<f64>,
}

impl IntegratorSpec {
    pub fn new(method: Method, dt: f64) -> Self {
        Self {
            method,
            dt,
            control_period: None,
        }
    }

    pub fn control_period(&self) -> f64 {
        self.control_period.unwrap_or(self.dt)
    }

    /// Plant steps per control period.
    pub fn substeps(&self) -> usize {
        (self.control_period() / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(ConfigError::invalid(
                "integrator.dt",
                format!("must be > 0, got {}", self.dt),
            ));
        }
        let h = self.control_period();
        if !(h.is_finite() && h > 0.0) {
            return Err(ConfigError::invalid("integrator.control_period", "must be > 0"));
        }
        let ratio = h / self.dt;
        if ratio < 1.0 - 1e-9 || (ratio - ratio.round()).abs() > 1e-6 * ratio {
            return Err(ConfigError::invalid(
                "integrator.dt",
                format!("dt = {} must divide the control period {h}", self.dt),
            ));
        }
        Ok(())
    }
}

/// Reusable scratch space for fixed-step integration.
#[derive(Debug, Clone, Default)]
pub struct Stepper {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Stepper {
    pub fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }

    /// Advances `x` from `t` to `t + dt` in place. `f(t, x, dx)` evaluates the
    /// derivative with the input already held.
    #[allow(clippy::needless_range_loop)]
    pub fn step<F>(&mut self, method: Method, f: &mut F, t: f64, x: &mut [f64], dt: f64)
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = x.len();
        if self.k1.len() != n {
            *self = Self::new(n);
        }
        match method {
            Method::ExplicitEuler => {
                f(t, x, &mut self.k1);
                for (xi, k) in x.iter_mut().zip(&self.k1) {
                    *xi += dt * k;
                }
            }
            Method::Rk4 => {
                let half = 0.5 * dt;
                f(t, x, &mut self.k1);
                for i in 0..n {
                    self.tmp[i] = x[i] + half * self.k1[i];
                }
                f(t + half, &self.tmp, &mut self.k2);
                for i in 0..n {
                    self.tmp[i] = x[i] + half * self.k2[i];
                }
                f(t + half, &self.tmp, &mut self.k3);
                for i in 0..n {
                    self.tmp[i] = x[i] + dt * self.k3[i];
                }
                f(t + dt, &self.tmp, &mut self.k4);
                for i in 0..n {
                    x[i] += dt / 6.0 * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
                }
            }
        }
    }
}

/// One step of `x' = f(t, x)` with a zero-order-held input baked into `f`.
pub fn step_integrate<F>(mut f: F, t: f64, x: &[f64], dt: f64, method: Method) -> Vec<f64>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut out = x.to_vec();
    Stepper::new(x.len()).step(method, &mut f, t, &mut out, dt);
    out
}

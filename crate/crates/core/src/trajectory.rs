//! Reference trajectories and the flatness-based feedforward of the
//! restricted mass-spring model.

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, Result};

/// Normalized degree-6 step `p(s) = 5 s^3 - 9 s^5 + 5 s^6` on `s in [0, 1]`.
///
/// It satisfies `p(0) = p'(0) = p''(0) = p''''(0) = 0` and
/// `p(1) = 1, p'(1) = p''(1) = 0`. Its slope
/// `15 s^2 (1 - s)^2 (1 + 2 s)` is non-negative, so the step is monotone.
pub const SMOOTH_STEP_COEFFS: [f64; 7] = [0.0, 0.0, 0.0, 5.0, 0.0, -9.0, 5.0];

/// Rest-to-rest polynomial transition from `y0` at `t0` to `y1` at `t1`,
/// constant outside `[t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolySmoothStep {
    pub t0: f64,
    pub t1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl PolySmoothStep {
    pub fn new(t0: f64, t1: f64, y0: f64, y1: f64) -> Result<Self> {
        let step = Self { t0, t1, y0, y1 };
        step.validate()?;
        Ok(step)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("t0", self.t0), ("t1", self.t1), ("y0", self.y0), ("y1", self.y1)] {
            if !v.is_finite() {
                return Err(ConfigError::invalid(format!("reference.{name}"), "must be finite"));
            }
        }
        if self.t1 <= self.t0 {
            return Err(ConfigError::invalid(
                "reference.t1",
                format!("must be greater than t0 ({} <= {})", self.t1, self.t0),
            ));
        }
        Ok(())
    }

    /// Coefficients in normalized time, lowest degree first.
    pub fn coefficients(&self) -> [f64; 7] {
        SMOOTH_STEP_COEFFS
    }

    pub fn span(&self) -> f64 {
        self.y1 - self.y0
    }

    /// `order`-th time derivative of the reference at `t`.
    pub fn eval(&self, t: f64, order: usize) -> f64 {
        let duration = self.t1 - self.t0;
        if t <= self.t0 {
            return if order == 0 { self.y0 } else { 0.0 };
        }
        if t >= self.t1 {
            return if order == 0 { self.y1 } else { 0.0 };
        }
        let s = (t - self.t0) / duration;
        let p = poly_derivative(&SMOOTH_STEP_COEFFS, s, order);
        let value = self.span() * p / duration.powi(order as i32);
        if order == 0 {
            self.y0 + value
        } else {
            value
        }
    }
}

/// `order`-th derivative of `sum c_i s^i`.
fn poly_derivative(coeffs: &[f64], s: f64, order: usize) -> f64 {
    let mut acc = 0.0;
    for i in (order..coeffs.len()).rev() {
        let falling: f64 = ((i - order + 1)..=i).map(|k| k as f64).product();
        acc = acc * s + coeffs[i] * falling;
    }
    acc
}

/// Reference signal of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Reference {
    SmoothStep { t0: f64, t1: f64, y0: f64, y1: f64 },
    Constant { value: f64 },
}

impl Reference {
    pub fn smooth_step(&self) -> Option<PolySmoothStep> {
        match *self {
            Reference::SmoothStep { t0, t1, y0, y1 } => Some(PolySmoothStep { t0, t1, y0, y1 }),
            Reference::Constant { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Reference::SmoothStep { .. } => self.smooth_step().map_or(Ok(()), |s| s.validate()),
            Reference::Constant { value } if !value.is_finite() => {
                Err(ConfigError::invalid("reference.value", "must be finite"))
            }
            Reference::Constant { .. } => Ok(()),
        }
    }

    pub fn eval(&self, t: f64, order: usize) -> f64 {
        match *self {
            Reference::Constant { value } => {
                if order == 0 {
                    value
                } else {
                    0.0
                }
            }
            Reference::SmoothStep { .. } => self.smooth_step().map_or(0.0, |s| s.eval(t, order)),
        }
    }

    /// Value, first and second derivative.
    pub fn jet(&self, t: f64) -> [f64; 3] {
        [self.eval(t, 0), self.eval(t, 1), self.eval(t, 2)]
    }

    pub fn initial_value(&self) -> f64 {
        match *self {
            Reference::Constant { value } => value,
            Reference::SmoothStep { y0, .. } => y0,
        }
    }

    /// Amplitude used to normalize error metrics. A constant reference has
    /// no span; its magnitude (or 1 when zero) is used instead.
    pub fn span(&self) -> f64 {
        match *self {
            Reference::SmoothStep { y0, y1, .. } => (y1 - y0).abs(),
            Reference::Constant { value } if value != 0.0 => value.abs(),
            Reference::Constant { .. } => 1.0,
        }
    }
}

pub fn eval_reference(step: &PolySmoothStep, t: f64, order: usize) -> f64 {
    step.eval(t, order)
}

/// Model parameters known to the controller for the mass-spring plant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassSpringEstimates {
    pub m: f64,
    pub k1_hat: f64,
    pub k3_hat: f64,
    pub d_hat: f64,
}

impl Default for MassSpringEstimates {
    fn default() -> Self {
        Self {
            m: 0.5,
            k1_hat: 2.0,
            k3_hat: 7.0,
            d_hat: 2.5,
        }
    }
}

/// Nominal open-loop input that makes the restricted model
/// `m y'' = -k1 y - k3 y^3 - d y' + u` follow `y*` exactly.
pub fn flat_feedforward_mass_spring(est: &MassSpringEstimates, y: f64, ydot: f64, yddot: f64) -> f64 {
    est.m * yddot + est.k1_hat * y + est.k3_hat * y.powi(3) + est.d_hat * ydot
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{SMatrix, SVector};

    /// Solves the seven boundary conditions directly.
    fn oracle_coefficients() -> [f64; 7] {
        let mut m = SMatrix::<f64, 7, 7>::zeros();
        let mut rhs = SVector::<f64, 7>::zeros();
        // value, first, second and fourth derivative at s = 0
        for (row, order) in [0usize, 1, 2, 4].into_iter().enumerate() {
            m[(row, order)] = (1..=order).map(|k| k as f64).product();
        }
        // value, first and second derivative at s = 1
        for (row, order) in [0usize, 1, 2].into_iter().enumerate() {
            for i in order..7 {
                m[(4 + row, i)] = ((i - order + 1)..=i).map(|k| k as f64).product();
            }
        }
        rhs[4] = 1.0;
        let sol = m.lu().solve(&rhs).unwrap();
        let mut out = [0.0; 7];
        out.copy_from_slice(sol.as_slice());
        out
    }

    #[test]
    fn coefficients_match_boundary_condition_solve() {
        let oracle = oracle_coefficients();
        for (a, b) in SMOOTH_STEP_COEFFS.iter().zip(oracle.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn midpoint_matches_oracle() {
        let step = PolySmoothStep::new(0.0, 20.0, 270.0, 600.0).unwrap();
        let c = oracle_coefficients();
        let p: f64 = c.iter().enumerate().map(|(i, ci)| ci * 0.5f64.powi(i as i32)).sum();
        assert_relative_eq!(step.eval(10.0, 0), 270.0 + 330.0 * p, epsilon = 1e-10);
        assert_relative_eq!(p, 27.0 / 64.0, epsilon = 1e-12);
    }

    #[test]
    fn boundary_values() {
        let step = PolySmoothStep::new(1.0, 6.0, 270.0, 600.0).unwrap();
        assert_eq!(step.eval(1.0, 0), 270.0);
        assert_eq!(step.eval(1.0, 1), 0.0);
        assert_eq!(step.eval(1.0, 2), 0.0);
        assert_eq!(step.eval(6.0, 0), 600.0);
        assert_eq!(step.eval(-3.0, 0), 270.0);
        assert_eq!(step.eval(9.0, 1), 0.0);
        // interior limits approach the boundary values
        assert_relative_eq!(step.eval(1.0 + 1e-9, 0), 270.0, epsilon = 1e-9);
        assert_relative_eq!(step.eval(6.0 - 1e-9, 0), 600.0, epsilon = 1e-9);
        assert_relative_eq!(step.eval(6.0 - 1e-9, 1), 0.0, epsilon = 1e-6);
        assert_relative_eq!(step.eval(6.0 - 1e-9, 2), 0.0, epsilon = 1e-6);
        let p4 = poly_derivative(&SMOOTH_STEP_COEFFS, 0.0, 4);
        assert_eq!(p4, 0.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let step = PolySmoothStep::new(0.5, 5.5, 0.0, 1.0).unwrap();
        let h = 1e-4;
        for i in 1..50 {
            let t = 0.5 + 0.1 * i as f64;
            let fd1 = (step.eval(t + h, 0) - step.eval(t - h, 0)) / (2.0 * h);
            let fd2 = (step.eval(t + h, 1) - step.eval(t - h, 1)) / (2.0 * h);
            assert_relative_eq!(fd1, step.eval(t, 1), epsilon = 1e-7);
            assert_relative_eq!(fd2, step.eval(t, 2), epsilon = 1e-7);
        }
    }

    #[test]
    fn monotone_and_bounded() {
        let step = PolySmoothStep::new(0.0, 1.0, 270.0, 600.0).unwrap();
        let mut prev = step.eval(0.0, 0);
        for i in 1..=1000 {
            let y = step.eval(i as f64 / 1000.0, 0);
            assert!(y >= prev);
            assert!((270.0..=600.0).contains(&y));
            prev = y;
        }
    }

    #[test]
    fn rejects_reversed_interval() {
        assert!(PolySmoothStep::new(2.0, 1.0, 0.0, 1.0).is_err());
        assert!(PolySmoothStep::new(1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn feedforward() {
        let est = MassSpringEstimates::default();
        assert_eq!(flat_feedforward_mass_spring(&est, 0.0, 0.0, 0.0), 0.0);
        assert_relative_eq!(flat_feedforward_mass_spring(&est, 1.0, 0.0, 0.0), 9.0);
        assert_relative_eq!(flat_feedforward_mass_spring(&est, 0.0, 2.0, 4.0), 0.5 * 4.0 + 2.5 * 2.0);
    }

    #[test]
    fn constant_reference() {
        let r = Reference::Constant { value: 2.0 };
        assert_eq!(r.jet(3.0), [2.0, 0.0, 0.0]);
        assert_eq!(r.span(), 2.0);
        assert_eq!(Reference::Constant { value: 0.0 }.span(), 1.0);
    }
}

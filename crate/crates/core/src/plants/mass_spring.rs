use serde::{Deserialize, Serialize};

use super::Plant;
use crate::error::{ConfigError, Result};
use crate::trajectory::MassSpringEstimates;

/// Nonlinear mass-spring `m y'' = -k1 y - k3 y^3 + Fr(y') - d y' + u` with
/// discontinuous friction `Fr`. The hatted values are the controller-side
/// estimates; the plant dynamics never read them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MassSpringPlant {
    pub m: f64,
    pub k1: f64,
    pub k3: f64,
    pub d: f64,
    pub k1_hat: f64,
    pub k3_hat: f64,
    pub d_hat: f64,
    /// Disable to simulate the restricted model with the true parameters.
    pub friction: bool,
    pub y0: f64,
    pub ydot0: f64,
}

impl Default for MassSpringPlant {
    fn default() -> Self {
        Self {
            m: 0.5,
            k1: 3.0,
            k3: 10.0,
            d: 5.0,
            k1_hat: 2.0,
            k3_hat: 7.0,
            d_hat: 2.5,
            friction: true,
            y0: 0.0,
            ydot0: 0.0,
        }
    }
}

impl MassSpringPlant {
    /// The restricted model: true parameters replaced by the estimates and
    /// no friction.
    pub fn restricted(&self) -> Self {
        Self {
            k1: self.k1_hat,
            k3: self.k3_hat,
            d: self.d_hat,
            friction: false,
            ..self.clone()
        }
    }

    pub fn estimates(&self) -> MassSpringEstimates {
        MassSpringEstimates {
            m: self.m,
            k1_hat: self.k1_hat,
            k3_hat: self.k3_hat,
            d_hat: self.d_hat,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m.is_finite() && self.m > 0.0) {
            return Err(ConfigError::invalid(
                "plant.m",
                format!("mass must be > 0, got {}", self.m),
            ));
        }
        for (name, v) in [
            ("plant.k1", self.k1),
            ("plant.k3", self.k3),
            ("plant.d", self.d),
            ("plant.k1_hat", self.k1_hat),
            ("plant.k3_hat", self.k3_hat),
            ("plant.d_hat", self.d_hat),
            ("plant.y0", self.y0),
            ("plant.ydot0", self.ydot0),
        ] {
            if !v.is_finite() {
                return Err(ConfigError::invalid(name, "must be finite"));
            }
        }
        Ok(())
    }
}

/// Discontinuous friction, zero at `y' = 0`. The viscous `-d y'` inside the
/// friction law comes on top of the separate viscous term of the plant.
pub fn friction(ydot: f64, d: f64) -> f64 {
    let quad = 0.3 + 0.4 * (ydot + 0.25).powi(2);
    if ydot > 0.0 {
        -quad - d * ydot
    } else if ydot < 0.0 {
        quad - d * ydot
    } else {
        0.0
    }
}

/// Returns `(y', y'')`.
pub fn mass_spring_derivs(plant: &MassSpringPlant, y: f64, ydot: f64, u: f64) -> (f64, f64) {
    let fr = if plant.friction { friction(ydot, plant.d) } else { 0.0 };
    let force = -plant.k1 * y - plant.k3 * y.powi(3) + fr - plant.d * ydot + u;
    (ydot, force / plant.m)
}

impl Plant for MassSpringPlant {
    fn state_dim(&self) -> usize {
        2
    }

    fn initial_state(&self) -> Vec<f64> {
        vec![self.y0, self.ydot0]
    }

    fn derivatives(&self, _t: f64, x: &[f64], u: f64, dx: &mut [f64]) {
        let (v, a) = mass_spring_derivs(self, x[0], x[1], u);
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
        vec!["ydot"]
    }

    fn extra_values(&self, _t: f64, x: &[f64], _u: f64, out: &mut Vec<f64>) {
        out.push(x[1]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn friction_values() {
        assert_relative_eq!(friction(1.0, 5.0), -5.925, epsilon = 1e-12);
        assert_eq!(friction(0.0, 5.0), 0.0);
        // for y' < 0 the Coulomb-like part opposes the motion
        assert_relative_eq!(friction(-1.0, 5.0), 0.3 + 0.4 * 0.5625 + 5.0, epsilon = 1e-12);
    }

    #[test]
    fn equilibrium_at_rest() {
        let p = MassSpringPlant::default();
        assert_eq!(mass_spring_derivs(&p, 0.0, 0.0, 0.0), (0.0, 0.0));
    }

    #[test]
    fn duplicated_viscous_term() {
        let p = MassSpringPlant::default();
        let (_, a) = mass_spring_derivs(&p, 0.0, 1.0, 0.0);
        // friction -5.925 plus the separate -d y' = -5, divided by m = 0.5
        assert_relative_eq!(a, (-5.925 - 5.0) / 0.5, epsilon = 1e-12);
    }

    #[test]
    fn restricted_model_uses_estimates() {
        let r = MassSpringPlant::default().restricted();
        assert_eq!((r.k1, r.k3, r.d, r.friction), (2.0, 7.0, 2.5, false));
        let (_, a) = mass_spring_derivs(&r, 1.0, 1.0, 0.0);
        assert_relative_eq!(a, (-2.0 - 7.0 - 2.5) / 0.5);
    }
}

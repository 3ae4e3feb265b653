//! Classic PI/PID baselines.

use serde::{Deserialize, Serialize};

/// Gains of a classic PI/PID. Signs are unrestricted.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassicGains {
    pub k_p: f64,
    pub k_i: f64,
    #[serde(default)]
    pub k_d: f64,
}

impl ClassicGains {
    pub fn pi(k_p: f64, k_i: f64) -> Self {
        Self { k_p, k_i, k_d: 0.0 }
    }

    pub fn pid(k_p: f64, k_i: f64, k_d: f64) -> Self {
        Self { k_p, k_i, k_d }
    }
}

/// Ziegler-Nichols gains of the heat-exchanger comparison PID.
pub const HEAT_EXCHANGER_PID: ClassicGains = ClassicGains {
    k_p: 1.8,
    k_i: 1.0,
    k_d: 0.75,
};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PidState {
    pub int_e: f64,
    pub e_prev: f64,
    pub u_prev: f64,
}

impl PidState {
    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

/// Positional PI, `u = k_p e + k_i int_e` with `int_e` including the current
/// sample.
pub fn pi_positional(gains: &ClassicGains, e: f64, state: &mut PidState, h: f64) -> f64 {
    state.int_e += e * h;
    let u = gains.k_p * e + gains.k_i * state.int_e;
    state.e_prev = e;
    state.u_prev = u;
    u
}

/// Velocity-form PI, `u_k = u_{k-1} + k_p (e_k - e_{k-1}) + k_i h e_k`.
pub fn pi_velocity(gains: &ClassicGains, e: f64, state: &mut PidState, h: f64) -> f64 {
    let u = state.u_prev + gains.k_p * (e - state.e_prev) + gains.k_i * h * e;
    state.int_e += e * h;
    state.e_prev = e;
    state.u_prev = u;
    u
}

/// Comparison PID of the heat exchanger:
/// `T(0) = y*' + 1.8 e + int_e + 0.75 e'`.
///
/// `e` must be oriented as reference minus output so that the loop is a
/// negative feedback on the (positive-gain) exchanger.
pub fn pid_heat_exchanger(e: f64, e_rate: f64, int_e: f64, ydot_star: f64) -> f64 {
    pid_with_rate_feedforward(&HEAT_EXCHANGER_PID, e, e_rate, int_e, ydot_star)
}

pub fn pid_with_rate_feedforward(gains: &ClassicGains, e: f64, e_rate: f64, int_e: f64, ydot_star: f64) -> f64 {
    ydot_star + gains.k_p * e + gains.k_i * int_e + gains.k_d * e_rate
}

/// Sampled PID with an unfiltered backward-difference derivative and an
/// optional reference-rate feedforward.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPid {
    pub gains: ClassicGains,
    pub rate_feedforward: bool,
    state: PidState,
    primed: bool,
}

impl SampledPid {
    pub fn new(gains: ClassicGains, rate_feedforward: bool) -> Self {
        Self {
            gains,
            rate_feedforward,
            state: PidState::default(),
            primed: false,
        }
    }

    pub fn state(&self) -> &PidState {
        &self.state
    }

    /// `e` is reference minus output. The derivative is zero on the first
    /// sample.
    pub fn update(&mut self, e: f64, ydot_star: f64, h: f64) -> f64 {
        let e_rate = if self.primed { (e - self.state.e_prev) / h } else { 0.0 };
        self.primed = true;
        self.state.int_e += e * h;
        let ff = if self.rate_feedforward { ydot_star } else { 0.0 };
        let u = pid_with_rate_feedforward(&self.gains, e, e_rate, self.state.int_e, ff);
        self.state.e_prev = e;
        self.state.u_prev = u;
        u
    }

    pub fn reset(&mut self) {
        self.state.reset();
        self.primed = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn positional_examples() {
        let mut s = PidState::default();
        for _ in 0..5 {
            assert_eq!(pi_positional(&ClassicGains::pi(3.0, 2.0), 0.0, &mut s, 0.1), 0.0);
        }
        let mut s = PidState::default();
        assert_relative_eq!(pi_positional(&ClassicGains::pi(2.0, 0.0), 1.5, &mut s, 0.1), 3.0);

        let mut s = PidState::default();
        let mut u = 0.0;
        for _ in 0..10 {
            u = pi_positional(&ClassicGains::pi(0.0, 1.0), 1.0, &mut s, 0.1);
        }
        assert_relative_eq!(u, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn velocity_examples() {
        let mut s = PidState::default();
        for _ in 0..5 {
            assert_eq!(pi_velocity(&ClassicGains::pi(3.0, 2.0), 0.0, &mut s, 0.1), 0.0);
        }
        let g = ClassicGains::pi(1.0, 0.0);
        let mut s = PidState::default();
        assert_eq!(pi_velocity(&g, 0.0, &mut s, 0.1), 0.0);
        assert_eq!(pi_velocity(&g, 1.0, &mut s, 0.1), 1.0);
        assert_eq!(pi_velocity(&g, 1.0, &mut s, 0.1), 1.0);
        assert_eq!(pi_velocity(&g, 1.0, &mut s, 0.1), 1.0);
    }

    #[test]
    fn velocity_is_differenced_positional() {
        let g = ClassicGains::pi(1.7, -0.4);
        let (mut a, mut b) = (PidState::default(), PidState::default());
        for k in 0..200 {
            let e = (k as f64 * 0.37).sin() + 0.1 * k as f64;
            let up = pi_positional(&g, e, &mut a, 0.01);
            let uv = pi_velocity(&g, e, &mut b, 0.01);
            assert_relative_eq!(up, uv, epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    #[test]
    fn heat_exchanger_pid() {
        assert_eq!(pid_heat_exchanger(0.0, 0.0, 0.0, 0.0), 0.0);
        assert_relative_eq!(pid_heat_exchanger(1.0, 0.0, 0.0, 0.0).abs(), 1.8);
        assert_relative_eq!(pid_heat_exchanger(0.0, 1.0, 0.0, 0.0), 0.75);
        assert_relative_eq!(pid_heat_exchanger(0.0, 0.0, 1.0, 2.0), 3.0);
    }

    #[test]
    fn heat_exchanger_pid_is_linear() {
        let base = pid_heat_exchanger(0.4, -1.2, 3.5, 0.8);
        for lambda in [-3.0, 0.5, 7.25] {
            let scaled = pid_heat_exchanger(0.4 * lambda, -1.2 * lambda, 3.5 * lambda, 0.8 * lambda);
            assert_relative_eq!(scaled, lambda * base, max_relative = 1e-12);
        }
    }

    #[test]
    fn sampled_pid_derivative_starts_at_zero() {
        let mut pid = SampledPid::new(HEAT_EXCHANGER_PID, true);
        let h = 0.01;
        let u0 = pid.update(1.0, 0.0, h);
        assert_relative_eq!(u0, 1.8 + 0.01);
        let u1 = pid.update(2.0, 0.5, h);
        assert_relative_eq!(u1, 0.5 + 1.8 * 2.0 + 0.03 + 0.75 * 100.0, epsilon = 1e-9);
        pid.reset();
        assert_eq!(pid.state(), &PidState::default());
    }
}

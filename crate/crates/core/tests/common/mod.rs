#![allow(dead_code)]

use mfcontrol::classic_control::{pi_velocity, PidState};
use mfcontrol::scenario::{Registry, ScenarioSpec};
use mfcontrol::ultra_local::{
    backward_difference, estimate_f_shifted, ip_control, pi_equivalent_gains, IntelligentGains, TrackingState,
    UltraLocalModel,
};

pub fn builtin(name: &str) -> ScenarioSpec {
    Registry::builtin()
        .expect("built-in registry")
        .get(name)
        .unwrap_or_else(|| panic!("no built-in scenario {name}"))
        .spec
        .clone()
}

/// Drives the iP law with the one-step estimator and the velocity PI with
/// mapped gains on the same error sequence (constant reference at 0, so
/// `y = e`). Returns the largest per-sample error relative to the magnitude
/// of the terms summed in that sample.
pub fn ip_pi_max_relative_error(alpha: f64, h: f64, k_p: f64, errors: &[f64]) -> f64 {
    let mut model = UltraLocalModel::new(alpha).unwrap();
    let gains = IntelligentGains::proportional(k_p);
    let pi = pi_equivalent_gains(alpha, h, k_p).unwrap();
    let mut pi_state = PidState::default();
    let mut tracking = TrackingState::default();
    let (mut y_prev, mut u_prev) = (0.0, 0.0);
    let mut worst: f64 = 0.0;
    for &e in errors {
        tracking.advance(e, h);
        model.set_f_hat(estimate_f_shifted(backward_difference(e, y_prev, h), u_prev, alpha));
        let u_ip = ip_control(&model, &gains, 0.0, &tracking);
        let u_pi = pi_velocity(&pi, e, &mut pi_state, h);
        let scale = [
            u_ip.abs(),
            u_pi.abs(),
            u_prev.abs(),
            (pi.k_p * (e - y_prev)).abs(),
            (pi.k_i * h * e).abs(),
        ]
        .into_iter()
        .fold(f64::MIN_POSITIVE, f64::max);
        worst = worst.max((u_ip - u_pi).abs() / scale);
        y_prev = e;
        u_prev = u_ip;
    }
    worst
}

/// Step response of `x'' + c x' + 4 x = 1` from rest, underdamped `c < 4`.
pub fn oscillator_step_response(c: f64, t: f64) -> f64 {
    let sigma = c / 2.0;
    let omega = (4.0 - sigma * sigma).sqrt();
    0.25 * (1.0 - (-sigma * t).exp() * ((omega * t).cos() + sigma / omega * (omega * t).sin()))
}

/// Largest error of the oscillator step response at `t_end` for each step
/// size, integrated with `method`.
pub fn oscillator_errors(method: mfcontrol::sim::Method, t_end: f64, steps: &[usize]) -> Vec<f64> {
    use mfcontrol::plants::{Plant, SecondOrderPlant};
    use mfcontrol::sim::Stepper;
    let plant = SecondOrderPlant::new(3.0);
    steps
        .iter()
        .map(|&n| {
            let dt = t_end / n as f64;
            let mut x = plant.initial_state();
            let mut stepper = Stepper::new(2);
            let mut f = |t: f64, x: &[f64], dx: &mut [f64]| plant.derivatives(t, x, 1.0, dx);
            for k in 0..n {
                stepper.step(method, &mut f, k as f64 * dt, &mut x, dt);
            }
            (x[0] - oscillator_step_response(3.0, t_end)).abs()
        })
        .collect()
}

/// Observed orders `log2(err_k / err_{k+1})` for successively halved steps.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

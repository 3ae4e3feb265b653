//! First-order ultra-local model, intelligent P/PI laws and estimators of `F`.
//!
//! The model is `y^(nu) = F + alpha * u` where `F` lumps every unmodelled
//! effect and is re-estimated at each sample. Only `nu = 1` is used by the
//! control laws here.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::classic_control::ClassicGains;
use crate::error::{ConfigError, Result};

/// Ultra-local model parameters together with the running estimate of `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltraLocalModel {
    nu: u32,
    alpha: f64,
    f_hat: f64,
}

impl UltraLocalModel {
    /// First-order model (`nu = 1`), the only order used by the control laws.
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_order(1, alpha)
    }

    pub fn with_order(nu: u32, alpha: f64) -> Result<Self> {
        if nu == 0 {
            return Err(ConfigError::invalid("nu", "derivation order must be positive"));
        }
        if !alpha.is_finite() || alpha == 0.0 {
            return Err(ConfigError::invalid(
                "alpha",
                format!("must be finite and nonzero, got {alpha}"),
            ));
        }
        Ok(Self { nu, alpha, f_hat: 0.0 })
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn f_hat(&self) -> f64 {
        self.f_hat
    }

    pub fn set_f_hat(&mut self, f_hat: f64) {
        self.f_hat = f_hat;
    }
}

/// Gains of the intelligent controllers. `k_i = 0` selects the iP law.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IntelligentGains {
    pub k_p: f64,
    pub k_i: f64,
}

impl IntelligentGains {
    pub fn new(k_p: f64, k_i: f64) -> Self {
        Self { k_p, k_i }
    }

    pub fn proportional(k_p: f64) -> Self {
        Self { k_p, k_i: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("k_p", self.k_p), ("k_i", self.k_i)] {
            if !v.is_finite() || v < 0.0 {
                return Err(ConfigError::invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Tracking error `e = y - y*` and its running integral.
///
/// The integral is a left-rectangle sum: after [`TrackingState::advance`] at
/// sample `k`, `int_e = h * sum(e_0 .. e_{k-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrackingState {
    pub e: f64,
    pub int_e: f64,
}

impl TrackingState {
    pub fn new(e: f64, int_e: f64) -> Self {
        Self { e, int_e }
    }

    /// Accumulates the previous error over one period and stores the new one.
    pub fn advance(&mut self, e: f64, h: f64) {
        self.int_e += self.e * h;
        self.e = e;
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

/// Intelligent proportional law: `u = -(F - y*' + K_P e) / alpha`.
///
/// Any integral gain in `gains` is ignored.
pub fn ip_control(model: &UltraLocalModel, gains: &IntelligentGains, ydot_star: f64, tracking: &TrackingState) -> f64 {
    -(model.f_hat - ydot_star + gains.k_p * tracking.e) / model.alpha
}

/// Intelligent proportional-integral law:
/// `u = -(F - y*' + K_P e + K_I int_e) / alpha`.
pub fn ipi_control(model: &UltraLocalModel, gains: &IntelligentGains, ydot_star: f64, tracking: &TrackingState) -> f64 {
    -(model.f_hat - ydot_star + gains.k_p * tracking.e + gains.k_i * tracking.int_e) / model.alpha
}

/// Integrand of the closed-loop identity `F = -alpha u + y*' - K_P e - K_I int_e`.
///
/// This identity only holds when the error actually follows
/// `e' + K_P e + K_I int_e = 0`. Evaluated on the output of
/// [`ipi_control`] it returns the estimate that was fed to the law, so it
/// cannot serve as an estimator on its own; [`EstimatorWindow`] integrates
/// the open identity `F = y' - alpha u` instead.
pub fn closed_loop_integrand(
    u: f64,
    ydot_star: f64,
    tracking: &TrackingState,
    alpha: f64,
    gains: &IntelligentGains,
) -> f64 {
    -alpha * u + ydot_star - gains.k_p * tracking.e - gains.k_i * tracking.int_e
}

/// One sample fed to the windowed estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorSample {
    /// Measured output at the current sample.
    pub y: f64,
    /// Control held over the period that just ended; `None` at cold start.
    pub u_prev: Option<f64>,
}

/// Moving-window estimator of `F`.
///
/// Over the last `n = ceil(delta / h)` periods it returns
///
/// ```text
/// F_approx = (y(T) - y(T - n h)) / (n h) - alpha * mean(u over the window)
/// ```
///
/// which is the window average of `y' - alpha u` computed without any
/// numerical differentiation. Before the window first fills, only the
/// periods seen so far are used; with no period at all it returns 0.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorWindow {
    delta: f64,
    h: f64,
    len: usize,
    outputs: VecDeque<f64>,
    inputs: VecDeque<f64>,
}

impl EstimatorWindow {
    pub fn new(delta: f64, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(ConfigError::invalid("h", format!("sample period must be > 0, got {h}")));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(ConfigError::invalid(
                "delta",
                format!("window must be > 0, got {delta}"),
            ));
        }
        let ratio = delta / h;
        if ratio < 1.0 - 1e-9 {
            return Err(ConfigError::invalid(
                "delta",
                format!("window {delta} s is shorter than the sample period {h} s"),
            ));
        }
        let len = ((ratio - 1e-9).ceil() as usize).max(1);
        Ok(Self {
            delta,
            h,
            len,
            outputs: VecDeque::with_capacity(len + 1),
            inputs: VecDeque::with_capacity(len),
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of periods spanned once the window is full.
    pub fn capacity(&self) -> usize {
        self.len
    }

    /// Number of periods currently averaged.
    pub fn filled(&self) -> usize {
        self.inputs.len()
    }

    pub fn reset(&mut self) {
        self.outputs.clear();
        self.inputs.clear();
    }

    fn push(&mut self, sample: EstimatorSample) {
        match sample.u_prev {
            Some(u) if !self.outputs.is_empty() => {
                if self.inputs.len() == self.len {
                    self.inputs.pop_front();
                }
                self.inputs.push_back(u);
            }
            // a sample without a held input restarts the window
            _ => self.reset(),
        }
        self.outputs.push_back(sample.y);
        while self.outputs.len() > self.inputs.len() + 1 {
            self.outputs.pop_front();
        }
    }

    fn current(&self, alpha: f64) -> f64 {
        let n = self.inputs.len();
        if n == 0 {
            return 0.0;
        }
        let (first, last) = match (self.outputs.front(), self.outputs.back()) {
            (Some(a), Some(b)) => (*a, *b),
            _ => return 0.0,
        };
        let span = n as f64 * self.h;
        let mean_u = self.inputs.iter().sum::<f64>() / n as f64;
        (last - first) / span - alpha * mean_u
    }
}

/// Pushes `sample` into the window and returns the updated estimate of `F`.
pub fn estimate_f_window(window: &mut EstimatorWindow, sample: EstimatorSample, alpha: f64) -> f64 {
    window.push(sample);
    window.current(alpha)
}

/// One-step estimator `F = y'(t) - alpha u(t - h)` with `y'` supplied by the
/// caller (see [`backward_difference`]).
pub fn estimate_f_shifted(ydot_measured: f64, u_prev: f64, alpha: f64) -> f64 {
    ydot_measured - alpha * u_prev
}

pub fn backward_difference(current: f64, previous: f64, h: f64) -> f64 {
    (current - previous) / h
}

/// Velocity-form PI gains that make a sampled classic PI coincide with the
/// iP law driven by [`estimate_f_shifted`].
///
/// With `e = y - y*`, the iP law and the one-step estimator give
/// `u_k = u_{k-1} - (e_k - e_{k-1}) / (alpha h) - (K_P / alpha) e_k`
/// for a constant reference, which is the velocity-form PI
/// `u_k = u_{k-1} + k_p (e_k - e_{k-1}) + k_i h e_k` with
/// `k_p = -1 / (alpha h)` and `k_i = -K_P / (alpha h)`.
pub fn pi_equivalent_gains(alpha: f64, h: f64, k_p: f64) -> Result<ClassicGains> {
    if !alpha.is_finite() || alpha == 0.0 {
        return Err(ConfigError::invalid(
            "alpha",
            format!("must be finite and nonzero, got {alpha}"),
        ));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(ConfigError::invalid("h", format!("sample period must be > 0, got {h}")));
    }
    let scale = alpha * h;
    Ok(ClassicGains {
        k_p: -1.0 / scale,
        k_i: -k_p / scale,
        k_d: 0.0,
    })
}

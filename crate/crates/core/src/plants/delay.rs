use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, Result};

/// Time-varying state delay `tau(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DelayProfile {
    /// `0 -> max -> 0`, repeated every `period` seconds.
    Triangular {
        max: f64,
        period: f64,
    },
    Constant {
        tau: f64,
    },
}

impl DelayProfile {
    pub fn tau(&self, t: f64) -> f64 {
        match *self {
            DelayProfile::Constant { tau } => tau,
            DelayProfile::Triangular { max, period } => {
                let phase = (t / period).rem_euclid(1.0);
                max * (1.0 - (2.0 * phase - 1.0).abs())
            }
        }
    }

    pub fn max_delay(&self) -> f64 {
        match *self {
            DelayProfile::Constant { tau } => tau,
            DelayProfile::Triangular { max, .. } => max,
        }
    }

    pub fn validate(&self, buffer: f64) -> Result<()> {
        match *self {
            DelayProfile::Constant { tau } if !(tau.is_finite() && tau >= 0.0) => {
                return Err(ConfigError::invalid("plant.delay.tau", "must be finite and >= 0"));
            }
            DelayProfile::Triangular { max, period } => {
                if !(max.is_finite() && max >= 0.0) {
                    return Err(ConfigError::invalid("plant.delay.max", "must be finite and >= 0"));
                }
                if !(period.is_finite() && period > 0.0) {
                    return Err(ConfigError::invalid("plant.delay.period", "must be > 0"));
                }
            }
            _ => {}
        }
        if self.max_delay() > buffer {
            return Err(ConfigError::invalid(
                "plant.delay",
                format!(
                    "maximum delay {} s exceeds the {} s history buffer",
                    self.max_delay(),
                    buffer
                ),
            ));
        }
        Ok(())
    }
}

/// History of accepted states for delayed-state lookups.
///
/// Entries older than `max_delay` behind the newest one are dropped, except
/// that one entry at or before the horizon is always kept so that lookups
/// inside the window can interpolate.
#[derive(Debug, Clone)]
pub struct DelayLine {
    max_delay: f64,
    initial: Vec<f64>,
    history: VecDeque<(f64, Vec<f64>)>,
}

impl DelayLine {
    pub fn new(max_delay: f64, initial: Vec<f64>) -> Self {
        let mut line = Self {
            max_delay,
            initial,
            history: VecDeque::new(),
        };
        line.reset();
        line
    }

    pub fn max_delay(&self) -> f64 {
        self.max_delay
    }

    pub fn len(&self) -> usize {
        self.history.len()
    }

    pub fn is_empty(&self) -> bool {
        self.history.is_empty()
    }

    pub fn reset(&mut self) {
        self.history.clear();
        self.history.push_back((0.0, self.initial.clone()));
    }

    /// Appends the accepted state at `t`, which must not precede the last entry.
    pub fn push(&mut self, t: f64, x: &[f64]) {
        if let Some((last, _)) = self.history.back() {
            debug_assert!(t >= *last, "delay line times must not decrease");
        }
        self.history.push_back((t, x.to_vec()));
        while self.history.len() > 2 && self.history[1].0 <= t - self.max_delay {
            self.history.pop_front();
        }
    }

    /// State at `query`, interpolating linearly between stored samples. When
    /// `query` lies after the last stored sample, interpolates towards the
    /// in-progress state `(t_cur, x_cur)`. Pre-history returns the initial
    /// state.
    pub fn lookup_into(&self, query: f64, t_cur: f64, x_cur: &[f64], out: &mut [f64]) {
        if query < 0.0 {
            out.copy_from_slice(&self.initial);
            return;
        }
        let (t_last, x_last) = self.history.back().expect("delay line is never empty");
        if query >= *t_last {
            if query >= t_cur || t_cur <= *t_last {
                out.copy_from_slice(x_cur);
            } else {
                let w = (query - t_last) / (t_cur - t_last);
                lerp(x_last, x_cur, w, out);
            }
            return;
        }
        let idx = self.history.partition_point(|(t, _)| *t <= query);
        if idx == 0 {
            out.copy_from_slice(&self.history[0].1);
            return;
        }
        let (t0, x0) = &self.history[idx - 1];
        let (t1, x1) = &self.history[idx];
        let w = if t1 > t0 { (query - t0) / (t1 - t0) } else { 1.0 };
        lerp(x0, x1, w, out);
    }

    pub fn lookup(&self, query: f64, t_cur: f64, x_cur: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x_cur.len()];
        self.lookup_into(query, t_cur, x_cur, &mut out);
        out
    }
}

fn lerp(a: &[f64], b: &[f64], w: f64, out: &mut [f64]) {
    for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
        *o = x + w * (y - x);
    }
}

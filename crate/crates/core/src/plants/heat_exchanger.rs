use serde::{Deserialize, Serialize};

use super::Plant;
use crate::error::{ConfigError, Result};

/// Multipliers applied to the flows and to the exchange conductance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fouling {
    pub flow: f64,
    pub conduction: f64,
}

impl Default for Fouling {
    fn default() -> Self {
        Self {
            flow: 1.0,
            conduction: 1.0,
        }
    }
}

impl Fouling {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("plant.fouling.flow", self.flow),
            ("plant.fouling.conduction", self.conduction),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(ConfigError::invalid(name, format!("must lie in (0, 1], got {v}")));
            }
        }
        Ok(())
    }
}

/// Two-stream exchanger discretized by the method of lines.
///
/// Both fluids flow towards increasing `x`. The hot inlet temperature
/// `T(0)` is the control, the cold outlet `S(L)` the output. The state is
/// `[T_1..T_N, S_1..S_N]`; the inlet samples `T_0`, `S_0` are boundary
/// values. Masses and the conductance `au` are totals over the length `L`.
///
/// The control is a deviation: `T(0) = hot_inlet + u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HeatExchangerPlant {
    pub length: f64,
    pub cells: usize,
    pub hot_mass: f64,
    pub hot_heat_capacity: f64,
    pub hot_flow: f64,
    pub cold_mass: f64,
    pub cold_heat_capacity: f64,
    pub cold_flow: f64,
    pub au: f64,
    pub hot_inlet: f64,
    pub cold_inlet: f64,
    pub initial_temperature: f64,
    pub fouling: Fouling,
}

impl Default for HeatExchangerPlant {
    fn default() -> Self {
        Self {
            length: 10.0,
            cells: 50,
            hot_mass: 100.0,
            hot_heat_capacity: 4180.0,
            hot_flow: 2000.0,
            cold_mass: 100.0,
            cold_heat_capacity: 4180.0,
            cold_flow: 200.0,
            au: 418_000.0,
            hot_inlet: 270.0,
            cold_inlet: 270.0,
            initial_temperature: 270.0,
            fouling: Fouling::default(),
        }
    }
}

/// Transport speeds and exchange rates after fouling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatExchangerRates {
    pub hot_speed: f64,
    pub cold_speed: f64,
    pub hot_exchange: f64,
    pub cold_exchange: f64,
    pub dx: f64,
}

impl HeatExchangerPlant {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("plant.length", self.length),
            ("plant.hot_mass", self.hot_mass),
            ("plant.hot_heat_capacity", self.hot_heat_capacity),
            ("plant.hot_flow", self.hot_flow),
            ("plant.cold_mass", self.cold_mass),
            ("plant.cold_heat_capacity", self.cold_heat_capacity),
            ("plant.cold_flow", self.cold_flow),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.au.is_finite() && self.au >= 0.0) {
            return Err(ConfigError::invalid("plant.au", "must be finite and >= 0"));
        }
        for (name, v) in [
            ("plant.hot_inlet", self.hot_inlet),
            ("plant.cold_inlet", self.cold_inlet),
            ("plant.initial_temperature", self.initial_temperature),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ConfigError::invalid(name, "temperatures must be finite and >= 0 K"));
            }
        }
        if self.cells < 2 {
            return Err(ConfigError::invalid("plant.cells", "at least 2 cells are required"));
        }
        self.fouling.validate()
    }

    pub fn with_fouling(&self, fouling: Fouling) -> Self {
        Self {
            fouling,
            ..self.clone()
        }
    }

    pub fn rates(&self) -> HeatExchangerRates {
        let f = self.fouling;
        HeatExchangerRates {
            hot_speed: f.flow * self.hot_flow * self.length / self.hot_mass,
            cold_speed: f.flow * self.cold_flow * self.length / self.cold_mass,
            hot_exchange: f.conduction * self.au / (self.hot_mass * self.hot_heat_capacity),
            cold_exchange: f.conduction * self.au / (self.cold_mass * self.cold_heat_capacity),
            dx: self.length / self.cells as f64,
        }
    }

    /// Courant number of the faster stream for step `dt`.
    pub fn cfl(&self, dt: f64) -> f64 {
        let r = self.rates();
        r.hot_speed.max(r.cold_speed) * dt / r.dx
    }

    pub fn hot_field<'a>(&self, x: &'a [f64]) -> &'a [f64] {
        &x[..self.cells]
    }

    pub fn cold_field<'a>(&self, x: &'a [f64]) -> &'a [f64] {
        &x[self.cells..]
    }

    /// Discrete steady state for a constant control, marching cell by cell.
    pub fn steady_state(&self, u: f64) -> Vec<f64> {
        let r = self.rates();
        let n = self.cells;
        let (a, b) = (r.hot_speed / r.dx, r.cold_speed / r.dx);
        let (k1, k2) = (r.hot_exchange, r.cold_exchange);
        let mut x = vec![0.0; 2 * n];
        let (mut t_prev, mut s_prev) = (self.hot_inlet + u, self.cold_inlet);
        for i in 0..n {
            // (a + k1) T - k1 S = a T_prev ; -k2 T + (b + k2) S = b S_prev
            let det = (a + k1) * (b + k2) - k1 * k2;
            let t = (a * t_prev * (b + k2) + k1 * b * s_prev) / det;
            let s = ((a + k1) * b * s_prev + k2 * a * t_prev) / det;
            x[i] = t;
            x[n + i] = s;
            t_prev = t;
            s_prev = s;
        }
        x
    }
}

/// Time derivative of both fields with hot inlet temperature `t0`.
pub fn heat_exchanger_derivs(plant: &HeatExchangerPlant, t0: f64, x: &[f64], dx: &mut [f64]) {
    let r = plant.rates();
    let n = plant.cells;
    let (a, b) = (r.hot_speed / r.dx, r.cold_speed / r.dx);
    let (hot, cold) = x.split_at(n);
    let (d_hot, d_cold) = dx.split_at_mut(n);
    let (mut t_prev, mut s_prev) = (t0, plant.cold_inlet);
    for i in 0..n {
        let (t, s) = (hot[i], cold[i]);
        let exchange = t - s;
        d_hot[i] = -a * (t - t_prev) - r.hot_exchange * exchange;
        d_cold[i] = -b * (s - s_prev) + r.cold_exchange * exchange;
        t_prev = t;
        s_prev = s;
    }
}

impl Plant for HeatExchangerPlant {
    fn state_dim(&self) -> usize {
        2 * self.cells
    }

    fn initial_state(&self) -> Vec<f64> {
        vec![self.initial_temperature; 2 * self.cells]
    }

    fn derivatives(&self, _t: f64, x: &[f64], u: f64, dx: &mut [f64]) {
        heat_exchanger_derivs(self, self.hot_inlet + u, x, dx);
    }

    fn output(&self, x: &[f64]) -> f64 {
        x[2 * self.cells - 1]
    }

    fn output_rate(&self, _t: f64, x: &[f64], _u: f64) -> f64 {
        let r = self.rates();
        let n = self.cells;
        let (t, s, s_prev) = (x[n - 1], x[2 * n - 1], x[2 * n - 2]);
        -r.cold_speed / r.dx * (s - s_prev) + r.cold_exchange * (t - s)
    }

    fn extra_columns(&self) -> Vec<&'static str> {
        vec!["hot_inlet", "hot_outlet"]
    }

    fn extra_values(&self, _t: f64, x: &[f64], u: f64, out: &mut Vec<f64>) {
        out.push(self.hot_inlet + u);
        out.push(x[self.cells - 1]);
    }

    fn check_state(&self, x: &[f64]) -> std::result::Result<(), String> {
        for (i, v) in x.iter().enumerate() {
            if !v.is_finite() {
                return Err(format!("temperature sample {i} is not finite"));
            }
            if *v < 0.0 {
                return Err(format!("temperature sample {i} is below 0 K ({v})"));
            }
        }
        Ok(())
    }
}

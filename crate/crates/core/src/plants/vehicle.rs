use serde::{Deserialize, Serialize};

use super::{sign, DelayLine, DelayProfile, Plant};
use crate::error::{ConfigError, Result};

pub type Mat6 = [[f64; 6]; 6];
pub type Vec6 = [f64; 6];

/// Linear model of the vehicle-mounted three-link arm, state
/// `[theta_b, theta_m', theta_mb, theta_b', theta_bl, theta_l']`.
///
/// Defaults are the benchmark values; any matrix may be overridden in a
/// scenario file with a full 6x6 (or 6-vector) table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VehicleMatrices {
    pub a: Mat6,
    pub b: Vec6,
    pub b1: Mat6,
    pub c: Vec6,
    pub a_d: Mat6,
}

impl Default for VehicleMatrices {
    fn default() -> Self {
        Self {
            a: [
                [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                [0.0, -338.14, -2.55e7, 50942.0, 0.0, 0.0],
                [0.0, 0.0066, 0.0, -1.0, 0.0, 0.0],
                [0.0, 0.66, 5e4, -110.1, -15e3, 10.0],
                [0.0, 0.0, 0.0, 1.0, 0.0, -1.0],
                [0.0, 0.0, 0.0, 7.69, 11538.0, -7.69],
            ],
            b: [0.0, 4523.1, 0.0, 0.0, 0.0, 0.0],
            b1: [
                [0.0; 6],
                [0.0, -50604.0, -769.0, 0.0, 5.1, 0.0],
                [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                [0.0, 99.0, 0.0, -0.01, 0.0, 0.01],
                [0.0; 6],
                [0.0; 6],
            ],
            c: [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            a_d: [
                [0.0; 6],
                [0.0, -10.0, 20.0, 0.0, 0.0, 0.0],
                [0.0, 0.007, 0.0, 0.1, 0.0, 0.0],
                [0.0, 0.0, 20.0, -2.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 0.1, 0.0, 0.1],
                [0.0, 0.0, 0.0, 2.0, 1.0, 0.0],
            ],
        }
    }
}

impl VehicleMatrices {
    fn is_default(&self) -> bool {
        *self == Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        let all = self
            .a
            .iter()
            .chain(self.b1.iter())
            .chain(self.a_d.iter())
            .flatten()
            .chain(self.b.iter())
            .chain(self.c.iter());
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(ConfigError::invalid("plant.matrices", "entries must be finite"));
        }
        if self.b.iter().all(|v| *v == 0.0) {
            return Err(ConfigError::invalid("plant.matrices.b", "input matrix is zero"));
        }
        Ok(())
    }
}

/// Constants of the friction and pitch disturbance `omega(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VehicleDisturbance {
    pub f_d: f64,
    pub f_mb: f64,
    pub j_m: f64,
    pub j_l: f64,
    /// Torque applied to the load; the motor torque is the control input.
    pub tau_al: f64,
    /// Pitch `theta_p = amplitude * sin(2 pi frequency t)`.
    pub pitch_amplitude: f64,
    pub pitch_frequency: f64,
    /// Scales the whole vector; 0 switches the disturbance off.
    pub enabled: bool,
}

impl Default for VehicleDisturbance {
    fn default() -> Self {
        Self {
            f_d: 0.5,
            f_mb: 0.5,
            j_m: 0.01,
            j_l: 0.01,
            tau_al: 0.0,
            pitch_amplitude: 0.05,
            pitch_frequency: 1.0,
            enabled: true,
        }
    }
}

impl VehicleDisturbance {
    /// `(theta_p', theta_p'')`.
    pub fn pitch_rates(&self, t: f64) -> (f64, f64) {
        let w = 2.0 * std::f64::consts::PI * self.pitch_frequency;
        (
            self.pitch_amplitude * w * (w * t).cos(),
            -self.pitch_amplitude * w * w * (w * t).sin(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("plant.disturbance.f_d", self.f_d),
            ("plant.disturbance.f_mb", self.f_mb),
            ("plant.disturbance.j_m", self.j_m),
            ("plant.disturbance.j_l", self.j_l),
            ("plant.disturbance.tau_al", self.tau_al),
            ("plant.disturbance.pitch_amplitude", self.pitch_amplitude),
            ("plant.disturbance.pitch_frequency", self.pitch_frequency),
        ] {
            if !v.is_finite() {
                return Err(ConfigError::invalid(name, "must be finite"));
            }
        }
        Ok(())
    }
}

/// `omega(t)` for state `x` under motor torque `u`.
pub fn disturbance_profile(t: f64, x: &[f64], u: f64, params: &VehicleDisturbance) -> Vec6 {
    if !params.enabled {
        return [0.0; 6];
    }
    let (pitch_rate, pitch_acc) = params.pitch_rates(t);
    [
        0.0,
        pitch_rate,
        params.f_d * sign(u - params.j_m * pitch_acc),
        params.f_d * sign(params.tau_al - params.j_l * pitch_acc),
        params.f_mb * sign(x[1] - pitch_rate),
        params.f_mb * sign(x[3] - pitch_rate),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehiclePlant {
    #[serde(default, skip_serializing_if = "VehicleMatrices::is_default")]
    pub matrices: VehicleMatrices,
    #[serde(default)]
    pub disturbance: VehicleDisturbance,
    #[serde(default)]
    pub x0: Vec6,
    /// State delay; when present the delayed-state model is simulated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay: Option<DelayProfile>,
    /// Length of the state history kept for delayed lookups, in seconds.
    #[serde(default = "default_buffer")]
    pub delay_buffer: f64,
}

fn default_buffer() -> f64 {
    0.01
}

impl Default for VehiclePlant {
    fn default() -> Self {
        Self {
            matrices: VehicleMatrices::default(),
            disturbance: VehicleDisturbance::default(),
            x0: [0.0; 6],
            delay: None,
            delay_buffer: default_buffer(),
        }
    }
}

impl VehiclePlant {
    pub fn validate(&self) -> Result<()> {
        self.matrices.validate()?;
        self.disturbance.validate()?;
        if self.x0.iter().any(|v| !v.is_finite()) {
            return Err(ConfigError::invalid("plant.x0", "must be finite"));
        }
        if !(self.delay_buffer.is_finite() && self.delay_buffer > 0.0) {
            return Err(ConfigError::invalid("plant.delay_buffer", "must be > 0"));
        }
        if let Some(d) = &self.delay {
            d.validate(self.delay_buffer)?;
        }
        Ok(())
    }
}

fn mat_vec_acc(m: &Mat6, x: &[f64], out: &mut [f64]) {
    for (o, row) in out.iter_mut().zip(m) {
        *o += row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    }
}

/// `A x + B u + B1 omega(t)`.
pub fn vehicle_derivs(plant: &VehiclePlant, t: f64, x: &[f64], u: f64, dx: &mut [f64]) {
    let m = &plant.matrices;
    let omega = disturbance_profile(t, x, u, &plant.disturbance);
    for (i, d) in dx.iter_mut().enumerate().take(6) {
        *d = m.b[i] * u;
    }
    mat_vec_acc(&m.a, x, dx);
    mat_vec_acc(&m.b1, &omega, dx);
}

/// `A x(t) + A_d x(t - tau) + B u + B1 omega(t)`; `x_delayed` is the looked-up
/// past state.
pub fn delayed_vehicle_derivs(plant: &VehiclePlant, t: f64, x: &[f64], x_delayed: &[f64], u: f64, dx: &mut [f64]) {
    vehicle_derivs(plant, t, x, u, dx);
    mat_vec_acc(&plant.matrices.a_d, x_delayed, dx);
}

/// Relative distance of each disturbance column of `B1` from the span of
/// `B`, `min_beta |b1_j - beta B| / |b1_j|`, for the nonzero columns.
pub fn matching_residuals(m: &VehicleMatrices) -> Vec<f64> {
    let bb: f64 = m.b.iter().map(|v| v * v).sum();
    (0..6)
        .filter_map(|j| {
            let col: Vec<f64> = (0..6).map(|i| m.b1[i][j]).collect();
            let norm2: f64 = col.iter().map(|v| v * v).sum();
            if norm2 == 0.0 {
                return None;
            }
            let beta = col.iter().zip(&m.b).map(|(a, b)| a * b).sum::<f64>() / bb;
            let res2: f64 = col.iter().zip(&m.b).map(|(a, b)| (a - beta * b).powi(2)).sum();
            Some((res2 / norm2).sqrt())
        })
        .collect()
}

/// Largest of [`matching_residuals`]: 0 when every disturbance enters through
/// the input channel.
pub fn matching_violation(m: &VehicleMatrices) -> f64 {
    matching_residuals(m).into_iter().fold(0.0, f64::max)
}

impl Plant for VehiclePlant {
    fn state_dim(&self) -> usize {
        6
    }

    fn initial_state(&self) -> Vec<f64> {
        self.x0.to_vec()
    }

    fn derivatives(&self, t: f64, x: &[f64], u: f64, dx: &mut [f64]) {
        vehicle_derivs(self, t, x, u, dx);
    }

    fn output(&self, x: &[f64]) -> f64 {
        self.matrices.c.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    fn output_rate(&self, t: f64, x: &[f64], u: f64) -> f64 {
        let mut dx = [0.0; 6];
        self.derivatives(t, x, u, &mut dx);
        self.output(&dx)
    }

    fn extra_columns(&self) -> Vec<&'static str> {
        vec!["theta_m_rate", "theta_mb", "theta_b_rate"]
    }

    fn extra_values(&self, _t: f64, x: &[f64], _u: f64, out: &mut Vec<f64>) {
        out.extend_from_slice(&[x[1], x[2], x[3]]);
    }
}

/// The vehicle arm with a time-varying state delay.
#[derive(Debug, Clone)]
pub struct DelayedVehiclePlant {
    pub plant: VehiclePlant,
    pub profile: DelayProfile,
    line: DelayLine,
}

impl DelayedVehiclePlant {
    pub fn new(plant: VehiclePlant, profile: DelayProfile) -> Result<Self> {
        profile.validate(plant.delay_buffer)?;
        let line = DelayLine::new(plant.delay_buffer, plant.x0.to_vec());
        Ok(Self { plant, profile, line })
    }

    pub fn line(&self) -> &DelayLine {
        &self.line
    }
}

impl Plant for DelayedVehiclePlant {
    fn state_dim(&self) -> usize {
        6
    }

    fn initial_state(&self) -> Vec<f64> {
        self.plant.initial_state()
    }

    fn derivatives(&self, t: f64, x: &[f64], u: f64, dx: &mut [f64]) {
        let mut past = [0.0; 6];
        self.line.lookup_into(t - self.profile.tau(t), t, x, &mut past);
        delayed_vehicle_derivs(&self.plant, t, x, &past, u, dx);
    }

    fn output(&self, x: &[f64]) -> f64 {
        self.plant.output(x)
    }

    fn output_rate(&self, t: f64, x: &[f64], u: f64) -> f64 {
        let mut dx = [0.0; 6];
        self.derivatives(t, x, u, &mut dx);
        self.plant.output(&dx)
    }

    fn extra_columns(&self) -> Vec<&'static str> {
        let mut cols = self.plant.extra_columns();
        cols.push("tau");
        cols
    }

    fn extra_values(&self, t: f64, x: &[f64], u: f64, out: &mut Vec<f64>) {
        self.plant.extra_values(t, x, u, out);
        out.push(self.profile.tau(t));
    }

    fn commit(&mut self, t: f64, x: &[f64]) {
        self.line.push(t, x);
    }

    fn reset(&mut self) {
        self.line.reset();
    }
}

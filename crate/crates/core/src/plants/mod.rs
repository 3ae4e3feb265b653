//! Benchmark plants.
//!
//! Every plant is a deterministic continuous-time model `x' = f(t, x, u)`
//! with a scalar input and a scalar measured output. The closed-loop engine
//! advances them with a fixed-step integrator and calls
//! [`Plant::begin_step`] / [`Plant::commit`] around every accepted step so
//! that plants with memory (delay lines, held disturbances) can update.

mod delay;
mod heat_exchanger;
mod integrator;
mod mass_spring;
mod second_order;
mod vehicle;

use serde::{Deserialize, Serialize};

pub use delay::{DelayLine, DelayProfile};
pub use heat_exchanger::{heat_exchanger_derivs, Fouling, HeatExchangerPlant};
pub use integrator::IntegratorPlant;
pub use mass_spring::{friction, mass_spring_derivs, MassSpringPlant};
pub use second_order::{second_order_derivs, SecondOrderPlant};
pub use vehicle::{
    delayed_vehicle_derivs, disturbance_profile, matching_residuals, matching_violation, vehicle_derivs,
    DelayedVehiclePlant, VehicleDisturbance, VehicleMatrices, VehiclePlant,
};

use crate::error::Result;

/// `sign` with `sign(0) = 0`.
pub fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub trait Plant {
    fn state_dim(&self) -> usize;

    fn initial_state(&self) -> Vec<f64>;

    /// State derivative at `t` with input `u` held.
    fn derivatives(&self, t: f64, x: &[f64], u: f64, dx: &mut [f64]);

    /// Measured quantity (before any measurement noise).
    fn output(&self, x: &[f64]) -> f64;

    /// Time derivative of the output with input `u` held at `t`.
    fn output_rate(&self, t: f64, x: &[f64], u: f64) -> f64;

    /// Names of plant-specific logged columns.
    fn extra_columns(&self) -> Vec<&'static str> {
        Vec::new()
    }

    fn extra_values(&self, _t: f64, _x: &[f64], _u: f64, _out: &mut Vec<f64>) {}

    /// Called before each integration step starting at `t`.
    fn begin_step(&mut self, _t: f64) {}

    /// Called with the accepted state at the end of each integration step.
    fn commit(&mut self, _t: f64, _x: &[f64]) {}

    /// Restores the plant memory to its initial condition.
    fn reset(&mut self) {}

    /// Physical admissibility of a state, beyond finiteness.
    fn check_state(&self, x: &[f64]) -> std::result::Result<(), String> {
        match x.iter().position(|v| !v.is_finite()) {
            Some(i) => Err(format!("state component {i} is not finite")),
            None => Ok(()),
        }
    }
}

/// Plant selection and parameters, as written in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum PlantSpec {
    SecondOrder(SecondOrderPlant),
    MassSpring(MassSpringPlant),
    /// Vehicle arm; with a `delay` table the delayed-state variant is built.
    Vehicle(VehiclePlant),
    HeatExchanger(HeatExchangerPlant),
    Integrator(IntegratorPlant),
}

impl PlantSpec {
    pub fn name(&self) -> &'static str {
        match self {
            PlantSpec::SecondOrder(_) => "second_order",
            PlantSpec::MassSpring(_) => "mass_spring",
            PlantSpec::Vehicle(p) if p.delay.is_some() => "delayed_vehicle",
            PlantSpec::Vehicle(_) => "vehicle",
            PlantSpec::HeatExchanger(_) => "heat_exchanger",
            PlantSpec::Integrator(_) => "integrator",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PlantSpec::SecondOrder(p) => p.validate(),
            PlantSpec::MassSpring(p) => p.validate(),
            PlantSpec::Vehicle(p) => p.validate(),
            PlantSpec::HeatExchanger(p) => p.validate(),
            PlantSpec::Integrator(p) => p.validate(),
        }
    }

    pub fn build(&self) -> Result<PlantModel> {
        self.validate()?;
        Ok(match self {
            PlantSpec::SecondOrder(p) => PlantModel::SecondOrder(p.clone()),
            PlantSpec::MassSpring(p) => PlantModel::MassSpring(p.clone()),
            PlantSpec::Vehicle(p) => match p.delay {
                Some(delay) => PlantModel::DelayedVehicle(DelayedVehiclePlant::new(p.clone(), delay)?),
                None => PlantModel::Vehicle(p.clone()),
            },
            PlantSpec::HeatExchanger(p) => PlantModel::HeatExchanger(p.clone()),
            PlantSpec::Integrator(p) => PlantModel::Integrator(p.clone()),
        })
    }
}

/// A runnable plant instance.
#[derive(Debug, Clone)]
pub enum PlantModel {
    SecondOrder(SecondOrderPlant),
    MassSpring(MassSpringPlant),
    Vehicle(VehiclePlant),
    DelayedVehicle(DelayedVehiclePlant),
    HeatExchanger(HeatExchangerPlant),
    Integrator(IntegratorPlant),
}

macro_rules! dispatch {
    ($self:expr, $p:ident => $body:expr) => {
        match $self {
            PlantModel::SecondOrder($p) => $body,
            PlantModel::MassSpring($p) => $body,
            PlantModel::Vehicle($p) => $body,
            PlantModel::DelayedVehicle($p) => $body,
            PlantModel::HeatExchanger($p) => $body,
            PlantModel::Integrator($p) => $body,
        }
    };
}

impl Plant for PlantModel {
    fn state_dim(&self) -> usize {
        dispatch!(self, p => p.state_dim())
    }

    fn initial_state(&self) -> Vec<f64> {
        dispatch!(self, p => p.initial_state())
    }

    fn derivatives(&self, t: f64, x: &[f64], u: f64, dx: &mut [f64]) {
        dispatch!(self, p => p.derivatives(t, x, u, dx))
    }

    fn output(&self, x: &[f64]) -> f64 {
        dispatch!(self, p => p.output(x))
    }

    fn output_rate(&self, t: f64, x: &[f64], u: f64) -> f64 {
        dispatch!(self, p => p.output_rate(t, x, u))
    }

    fn extra_columns(&self) -> Vec<&'static str> {
        dispatch!(self, p => p.extra_columns())
    }

    fn extra_values(&self, t: f64, x: &[f64], u: f64, out: &mut Vec<f64>) {
        dispatch!(self, p => p.extra_values(t, x, u, out))
    }

    fn begin_step(&mut self, t: f64) {
        dispatch!(self, p => p.begin_step(t))
    }

    fn commit(&mut self, t: f64, x: &[f64]) {
        dispatch!(self, p => p.commit(t, x))
    }

    fn reset(&mut self) {
        dispatch!(self, p => p.reset())
    }

    fn check_state(&self, x: &[f64]) -> std::result::Result<(), String> {
        dispatch!(self, p => p.check_state(x))
    }
}

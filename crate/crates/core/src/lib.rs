//! Model-free control laboratory.
//!
//! The crate implements the first-order ultra-local model `y' = F + alpha * u`,
//! the intelligent P / PI control laws built on it, online estimators of the
//! lumped term `F`, classic PI/PID baselines, and a set of benchmark plants
//! (damped/undamped oscillator, nonlinear mass-spring with discontinuous
//! friction, a six-state vehicle arm with unmatched disturbances and an
//! optional state delay, and a parallel-flow heat exchanger discretized by the
//! method of lines). Closed-loop experiments are described declaratively by
//! [`scenario::ScenarioSpec`] files and executed by [`sim::run_closed_loop`].

pub mod classic_control;
pub mod error;
pub mod plants;
pub mod scenario;
pub mod sim;
pub mod trajectory;
pub mod ultra_local;

pub use error::{ConfigError, ScenarioError, SimError};

//! Fixed-step closed-loop simulation.

mod closed_loop;
mod integrator;
mod log;
pub mod metrics;
mod noise;

pub use closed_loop::{run_closed_loop, run_with_plant, DIVERGENCE_BOUND};
pub use integrator::{step_integrate, IntegratorSpec, Method, Stepper};
pub use log::{Row, SimLog, BASE_COLUMNS};
pub use metrics::{metrics, metrics_from, Metrics};
pub use noise::{NoiseKind, NoiseSource, NoiseSpec};

//! Python bindings: scenarios, closed-loop runs and the control laws.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mfcontrol::scenario::{load_scenario, parse_scenario, run_to_dir, to_toml, Registry, ScenarioSpec};
use mfcontrol::sim::{metrics, run_closed_loop, SimLog};
use mfcontrol::trajectory::PolySmoothStep;
use mfcontrol::ultra_local::{self, IntelligentGains, TrackingState, UltraLocalModel};
use mfcontrol::{ConfigError, ScenarioError, SimError};

create_exception!(mfcontrol, ScenarioFileError, PyException);
create_exception!(mfcontrol, DivergenceError, PyException);

fn scenario_err(e: ScenarioError) -> PyErr {
    match e {
        ScenarioError::Sim(s) => sim_err(s),
        ScenarioError::Unknown(name) => PyKeyError::new_err(format!("unknown scenario `{name}`")),
        other => ScenarioFileError::new_err(other.to_string()),
    }
}

fn sim_err(e: SimError) -> PyErr {
    match e {
        SimError::Config(c) => config_err(c),
        d @ SimError::Diverged { .. } => DivergenceError::new_err(d.to_string()),
    }
}

fn config_err(e: ConfigError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn registry(custom_dir: Option<PathBuf>) -> PyResult<Registry> {
    match custom_dir {
        Some(d) => Registry::with_custom_dir(d),
        None => Registry::builtin(),
    }
    .map_err(scenario_err)
}

/// A closed-loop experiment.
#[pyclass(name = "Scenario", module = "mfcontrol", from_py_object)]
#[derive(Clone)]
struct PyScenario {
    spec: ScenarioSpec,
}

#[pymethods]
impl PyScenario {
    /// Built-in scenario by name.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        let spec = registry(None)?.resolve(name).map_err(scenario_err)?;
        Ok(Self { spec })
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        let spec = parse_scenario(text, "<python>").map_err(scenario_err)?;
        Ok(Self { spec })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let spec = load_scenario(path).map_err(scenario_err)?;
        Ok(Self { spec })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.spec.name
    }

    #[getter]
    fn description(&self) -> &str {
        &self.spec.description
    }

    #[getter]
    fn horizon(&self) -> f64 {
        self.spec.horizon
    }

    #[getter]
    fn plant(&self) -> &'static str {
        self.spec.plant.name()
    }

    #[getter]
    fn controller(&self) -> &'static str {
        self.spec.controller.name()
    }

    #[getter]
    fn control_period(&self) -> f64 {
        self.spec.control_period()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.spec.noise.seed
    }

    fn with_seed(&self, seed: u64) -> Self {
        Self {
            spec: self.spec.clone().with_seed(seed),
        }
    }

    fn to_toml(&self) -> String {
        to_toml(&self.spec)
    }

    /// Runs the scenario; raises `DivergenceError` if the loop blows up.
    fn run(&self, py: Python<'_>) -> PyResult<PyLog> {
        let spec = self.spec.clone();
        let log = py.detach(move || run_closed_loop(&spec)).map_err(sim_err)?;
        Ok(PyLog { log })
    }

    /// Runs and writes the CSV and plots into `out_dir`; returns the paths.
    fn run_to_dir(&self, py: Python<'_>, out_dir: PathBuf) -> PyResult<Vec<String>> {
        let spec = self.spec.clone();
        let summary = py
            .detach(move || run_to_dir(&spec, &out_dir))
            .map_err(|(e, _)| scenario_err(e))?;
        Ok(summary.files.iter().map(|p| p.display().to_string()).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario({:?}, plant={}, controller={})",
            self.spec.name,
            self.spec.plant.name(),
            self.spec.controller.name()
        )
    }
}

/// Time series of a run, one row per control period.
#[pyclass(name = "SimLog", module = "mfcontrol")]
struct PyLog {
    log: SimLog,
}

#[pymethods]
impl PyLog {
    #[getter]
    fn name(&self) -> &str {
        &self.log.name
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.log.seed
    }

    fn columns(&self) -> Vec<String> {
        self.log.columns().into_iter().map(String::from).collect()
    }

    fn column(&self, name: &str) -> PyResult<Vec<f64>> {
        let l = &self.log;
        let values = match name {
            "t" => &l.t,
            "y" => &l.y,
            "y_ref" => &l.y_ref,
            "u" => &l.u,
            "f_hat" => &l.f_hat,
            "e" => &l.e,
            other => {
                return l
                    .extra(other)
                    .map(<[f64]>::to_vec)
                    .ok_or_else(|| PyKeyError::new_err(other.to_string()))
            }
        };
        Ok(values.clone())
    }

    fn __getitem__(&self, name: &str) -> PyResult<Vec<f64>> {
        self.column(name)
    }

    fn __len__(&self) -> usize {
        self.log.len()
    }

    fn to_csv(&self) -> String {
        self.log.to_csv_string()
    }

    /// rms and max error, control variance and 2% settling time; `span`
    /// defaults to 1.
    #[pyo3(signature = (span = 1.0, from_time = None))]
    fn metrics<'py>(&self, py: Python<'py>, span: f64, from_time: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let m = match from_time {
            Some(t) => metrics::metrics_from(&self.log, span, t),
            None => metrics::metrics(&self.log, span),
        };
        let d = PyDict::new(py);
        d.set_item("rms_error", m.rms_error)?;
        d.set_item("max_abs_error", m.max_abs_error)?;
        d.set_item("control_variance", m.control_variance)?;
        d.set_item("settling_time", m.settling_time)?;
        Ok(d)
    }
}

#[pyfunction]
#[pyo3(signature = (custom_dir = None))]
fn list_scenarios(custom_dir: Option<PathBuf>) -> PyResult<Vec<String>> {
    Ok(registry(custom_dir)?.names().into_iter().map(String::from).collect())
}

/// Runs a registered scenario or a scenario file.
#[pyfunction]
#[pyo3(signature = (name_or_path, seed = None, custom_dir = None))]
fn run(py: Python<'_>, name_or_path: &str, seed: Option<u64>, custom_dir: Option<PathBuf>) -> PyResult<PyLog> {
    let mut spec = registry(custom_dir)?.resolve(name_or_path).map_err(scenario_err)?;
    if let Some(s) = seed {
        spec = spec.with_seed(s);
    }
    PyScenario { spec }.run(py)
}

/// Velocity-form PI gains `(k_p, k_i)` equivalent to the iP law.
#[pyfunction]
fn pi_equivalent_gains(alpha: f64, h: f64, k_p: f64) -> PyResult<(f64, f64)> {
    let g = ultra_local::pi_equivalent_gains(alpha, h, k_p).map_err(config_err)?;
    Ok((g.k_p, g.k_i))
}

#[pyfunction]
#[pyo3(signature = (f_hat, alpha, k_p, ydot_star, e, k_i = 0.0, int_e = 0.0))]
fn ipi_control(f_hat: f64, alpha: f64, k_p: f64, ydot_star: f64, e: f64, k_i: f64, int_e: f64) -> PyResult<f64> {
    let mut model = UltraLocalModel::new(alpha).map_err(config_err)?;
    model.set_f_hat(f_hat);
    let tracking = TrackingState::new(e, int_e);
    Ok(ultra_local::ipi_control(
        &model,
        &IntelligentGains::new(k_p, k_i),
        ydot_star,
        &tracking,
    ))
}

#[pyfunction]
fn estimate_f_shifted(ydot_measured: f64, u_prev: f64, alpha: f64) -> f64 {
    ultra_local::estimate_f_shifted(ydot_measured, u_prev, alpha)
}

/// `order`-th derivative of the degree-6 rest-to-rest step at `t`.
#[pyfunction]
#[pyo3(signature = (t, t0, t1, y0, y1, order = 0))]
fn smooth_step(t: f64, t0: f64, t1: f64, y0: f64, y1: f64, order: usize) -> PyResult<f64> {
    let step = PolySmoothStep::new(t0, t1, y0, y1).map_err(config_err)?;
    Ok(step.eval(t, order))
}

#[pymodule]
#[pyo3(name = "mfcontrol")]
fn mfcontrol_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyLog>()?;
    m.add_function(wrap_pyfunction!(list_scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(pi_equivalent_gains, m)?)?;
    m.add_function(wrap_pyfunction!(ipi_control, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_f_shifted, m)?)?;
    m.add_function(wrap_pyfunction!(smooth_step, m)?)?;
    m.add("ScenarioFileError", m.py().get_type::<ScenarioFileError>())?;
    m.add("DivergenceError", m.py().get_type::<DivergenceError>())?;
    Ok(())
}

use super::{NoiseSource, Row, SimLog, Stepper};
use crate::classic_control::{pi_positional, pi_velocity, ClassicGains, PidState, SampledPid};
use crate::error::SimError;
use crate::plants::{MassSpringPlant, Plant, PlantModel, PlantSpec};
use crate::scenario::{ControllerSpec, ErrorOrientation, EstimatorSpec, PiForm, ScenarioSpec};
use crate::trajectory::{flat_feedforward_mass_spring, MassSpringEstimates};
use crate::ultra_local::{
    backward_difference, estimate_f_shifted, estimate_f_window, ip_control, ipi_control, EstimatorSample,
    EstimatorWindow, IntelligentGains, TrackingState, UltraLocalModel,
};

/// Any state component or control beyond this magnitude ends the run as
/// diverged.
pub const DIVERGENCE_BOUND: f64 = 1e12;

enum Estimator {
    Window(EstimatorWindow),
    Shifted,
    Oracle,
}

enum Law {
    Intelligent {
        model: UltraLocalModel,
        gains: IntelligentGains,
        estimator: Estimator,
        integral: bool,
        feedforward: Option<MassSpringEstimates>,
    },
    Pi {
        gains: ClassicGains,
        form: PiForm,
        error: ErrorOrientation,
        state: PidState,
    },
    Pid {
        pid: SampledPid,
        error: ErrorOrientation,
    },
    OpenLoop(MassSpringEstimates),
}

fn mass_spring_estimates(spec: &ScenarioSpec) -> MassSpringEstimates {
    match &spec.plant {
        PlantSpec::MassSpring(p) => p.estimates(),
        _ => MassSpringPlant::default().estimates(),
    }
}

fn build_law(spec: &ScenarioSpec) -> Result<Law, SimError> {
    let h = spec.control_period();
    Ok(match spec.controller {
        ControllerSpec::Ip { alpha, .. }
        | ControllerSpec::Ipi { alpha, .. }
        | ControllerSpec::FlatIpi { alpha, .. } => {
            let (_, gains) = spec.controller.intelligent().expect("intelligent controller");
            let estimator = match spec.effective_estimator().unwrap_or_default() {
                EstimatorSpec::Window { delta } => Estimator::Window(EstimatorWindow::new(delta, h)?),
                EstimatorSpec::Shifted => Estimator::Shifted,
                EstimatorSpec::Oracle => Estimator::Oracle,
            };
            Law::Intelligent {
                model: UltraLocalModel::new(alpha)?,
                gains,
                estimator,
                integral: !matches!(spec.controller, ControllerSpec::Ip { .. }),
                feedforward: spec.controller.uses_feedforward().then(|| mass_spring_estimates(spec)),
            }
        }
        ControllerSpec::Pi { k_p, k_i, form, error } => Law::Pi {
            gains: ClassicGains::pi(k_p, k_i),
            form,
            error,
            state: PidState::default(),
        },
        ControllerSpec::Pid {
            k_p,
            k_i,
            k_d,
            rate_feedforward,
            error,
        } => Law::Pid {
            pid: SampledPid::new(ClassicGains::pid(k_p, k_i, k_d), rate_feedforward),
            error,
        },
        ControllerSpec::OpenLoopFlat => Law::OpenLoop(mass_spring_estimates(spec)),
    })
}

/// Runs a validated scenario over its horizon.
///
/// Each control period: measure the output (plus noise), update the
/// tracking error and its integral, estimate `F`, compute the control, log
/// the row, then integrate the plant with the control held.
pub fn run_closed_loop(spec: &ScenarioSpec) -> Result<SimLog, SimError> {
    spec.validate()?;
    let mut plant = spec.plant.build()?;
    run_with_plant(spec, &mut plant)
}

/// Like [`run_closed_loop`] on an already built plant (which is reset first).
pub fn run_with_plant(spec: &ScenarioSpec, plant: &mut PlantModel) -> Result<SimLog, SimError> {
    plant.reset();
    let h = spec.control_period();
    let dt = spec.integrator.dt;
    let substeps = spec.integrator.substeps();
    let method = spec.integrator.method;

    let mut law = build_law(spec)?;
    let mut noise = NoiseSource::new(spec.noise)?;

    let mut extra_names: Vec<String> = plant.extra_columns().iter().map(|s| s.to_string()).collect();
    extra_names.push("y_meas".into());
    let mut log = SimLog::new(spec.name.clone(), spec.noise.seed, extra_names);
    log.parameters = toml::to_string(spec).unwrap_or_default();

    let mut x = plant.initial_state();
    let mut stepper = Stepper::new(x.len());
    let mut tracking = TrackingState::default();
    let mut extras = Vec::new();
    // control actually applied, and the part of it produced by the feedback law
    let (mut u_total_prev, mut u_ctrl_prev) = (0.0, 0.0);
    let mut y_meas_prev = 0.0;

    for k in 0..spec.periods() {
        let t = k as f64 * h;
        let y = plant.output(&x);
        let y_meas = y + noise.sample();
        let [y_ref, ydot_ref, yddot_ref] = spec.reference.jet(t);
        let e_meas = y_meas - y_ref;
        tracking.advance(e_meas, h);

        let (u, u_ctrl, f_hat) = match &mut law {
            Law::Intelligent {
                model,
                gains,
                estimator,
                integral,
                feedforward,
            } => {
                let alpha = model.alpha();
                let f_hat = match estimator {
                    Estimator::Window(w) => {
                        let sample = EstimatorSample {
                            y: y_meas,
                            u_prev: (k > 0).then_some(u_ctrl_prev),
                        };
                        estimate_f_window(w, sample, alpha)
                    }
                    Estimator::Shifted if k == 0 => 0.0,
                    Estimator::Shifted => {
                        estimate_f_shifted(backward_difference(y_meas, y_meas_prev, h), u_ctrl_prev, alpha)
                    }
                    Estimator::Oracle => plant.output_rate(t, &x, u_total_prev) - alpha * u_ctrl_prev,
                };
                model.set_f_hat(f_hat);
                let du = if *integral {
                    ipi_control(model, gains, ydot_ref, &tracking)
                } else {
                    ip_control(model, gains, ydot_ref, &tracking)
                };
                let nominal = feedforward.map_or(0.0, |est| {
                    flat_feedforward_mass_spring(&est, y_ref, ydot_ref, yddot_ref)
                });
                (nominal + du, du, f_hat)
            }
            Law::Pi {
                gains,
                form,
                error,
                state,
            } => {
                let ec = error.apply(e_meas);
                let u = match form {
                    PiForm::Velocity => pi_velocity(gains, ec, state, h),
                    PiForm::Positional => pi_positional(gains, ec, state, h),
                };
                (u, u, f64::NAN)
            }
            Law::Pid { pid, error } => {
                let u = pid.update(error.apply(e_meas), ydot_ref, h);
                (u, u, f64::NAN)
            }
            Law::OpenLoop(est) => {
                let u = flat_feedforward_mass_spring(est, y_ref, ydot_ref, yddot_ref);
                (u, 0.0, f64::NAN)
            }
        };

        extras.clear();
        plant.extra_values(t, &x, u, &mut extras);
        extras.push(y_meas);
        log.push(
            Row {
                t,
                y,
                y_ref,
                u,
                f_hat,
                e: y - y_ref,
            },
            &extras,
        );

        if !u.is_finite() || u.abs() > DIVERGENCE_BOUND {
            return Err(diverged(t, format!("control out of bounds ({u})"), log));
        }
        for s in 0..substeps {
            let ts = t + s as f64 * dt;
            plant.begin_step(ts);
            {
                let p: &PlantModel = plant;
                let mut f = |tt: f64, xx: &[f64], dx: &mut [f64]| p.derivatives(tt, xx, u, dx);
                stepper.step(method, &mut f, ts, &mut x, dt);
            }
            if let Err(detail) = plant.check_state(&x) {
                return Err(diverged(ts + dt, detail, log));
            }
            if let Some(i) = x.iter().position(|v| v.abs() > DIVERGENCE_BOUND) {
                return Err(diverged(
                    ts + dt,
                    format!("state component {i} exceeds {DIVERGENCE_BOUND:e}"),
                    log,
                ));
            }
            plant.commit(ts + dt, &x);
        }
        u_total_prev = u;
        u_ctrl_prev = u_ctrl;
        y_meas_prev = y_meas;
    }
    Ok(log)
}

fn diverged(t: f64, detail: String, log: SimLog) -> SimError {
    SimError::Diverged {
        t,
        detail,
        partial: Box::new(log),
    }
}

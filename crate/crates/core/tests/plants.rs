mod common;

use common::builtin;
use mfcontrol::plants::{
    heat_exchanger_derivs, matching_violation, DelayLine, DelayProfile, DelayedVehiclePlant, Fouling,
    HeatExchangerPlant, MassSpringPlant, Plant, PlantSpec, VehicleDisturbance, VehiclePlant,
};
use mfcontrol::sim::{run_closed_loop, Method, NoiseSpec, Stepper};

fn integrate<P: Plant>(plant: &mut P, u: impl Fn(f64) -> f64, dt: f64, steps: usize) -> Vec<f64> {
    let mut x = plant.initial_state();
    let mut stepper = Stepper::new(x.len());
    for k in 0..steps {
        let t = k as f64 * dt;
        let uk = u(t);
        plant.begin_step(t);
        {
            let p = &*plant;
            stepper.step(
                Method::Rk4,
                &mut |tt, xx: &[f64], dx: &mut [f64]| p.derivatives(tt, xx, uk, dx),
                t,
                &mut x,
                dt,
            );
        }
        plant.commit(t + dt, &x);
    }
    x
}

#[test]
fn flat_input_reproduces_the_reference_on_the_restricted_model() {
    let nominal = builtin("mass_spring_nominal");
    let mut spec = nominal.clone();
    spec.noise = NoiseSpec::none();
    let PlantSpec::MassSpring(p) = &nominal.plant else {
        panic!("mass-spring scenario expected")
    };
    spec.plant = PlantSpec::MassSpring(p.restricted());
    let mut previous = f64::INFINITY;
    for dt in [1e-3, 1e-4] {
        spec.integrator.dt = dt;
        spec.integrator.control_period = None;
        let log = run_closed_loop(&spec).unwrap();
        let worst = log.e.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        // the only gap is the zero-order hold of the input, first order in dt
        assert!(worst < dt, "dt = {dt}: {worst:e}");
        assert!(worst < previous / 8.0);
        previous = worst;
    }
}

#[test]
fn restricted_model_drops_friction_only() {
    let p = MassSpringPlant::default();
    let r = p.restricted();
    assert!(!r.friction);
    assert_eq!((r.k1, r.k3, r.d), (p.k1_hat, p.k3_hat, p.d_hat));
}

#[test]
fn zero_delay_matches_merged_system_matrix() {
    let base = VehiclePlant::default();
    let mut merged = base.clone();
    for i in 0..6 {
        for j in 0..6 {
            merged.matrices.a[i][j] += base.matrices.a_d[i][j];
        }
    }
    let mut delayed = DelayedVehiclePlant::new(base, DelayProfile::Constant { tau: 0.0 }).unwrap();
    let u = |t: f64| (5.0 * t).sin() + 0.3;
    let x = integrate(&mut delayed, u, 1e-4, 5000);
    let z = integrate(&mut merged, u, 1e-4, 5000);
    let scale = z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for (a, b) in x.iter().zip(&z) {
        assert!((a - b).abs() <= 1e-12 * scale, "{a} vs {b}");
    }
}

#[test]
fn delay_line_interpolates_and_holds_prehistory() {
    let mut line = DelayLine::new(0.01, vec![5.0]);
    for k in 1..=20 {
        let t = k as f64 * 1e-3;
        line.push(t, &[t * 100.0]);
    }
    // before t = 0 the initial state is returned
    assert_eq!(line.lookup(-0.001, 0.02, &[2.0]), vec![5.0]);
    let mid = line.lookup(0.0155, 0.02, &[2.0])[0];
    assert!((mid - 1.55).abs() < 1e-12);
    assert_eq!(line.lookup(0.02, 0.02, &[2.0]), vec![2.0]);
}

#[test]
fn triangular_delay_profile_spans_zero_to_max() {
    let p = DelayProfile::Triangular {
        max: 0.009,
        period: 5.0,
    };
    assert_eq!(p.tau(0.0), 0.0);
    assert!((p.tau(2.5) - 0.009).abs() < 1e-15);
    assert!((p.tau(1.25) - 0.0045).abs() < 1e-15);
    assert!(p.validate(0.008).is_err());
    assert!(p.validate(0.01).is_ok());
}

#[test]
fn disturbance_channels_violate_matching() {
    let p = VehiclePlant::default();
    assert!(matching_violation(&p.matrices) > 0.99);
}

#[test]
fn disabled_disturbance_leaves_a_linear_system() {
    let p = VehiclePlant {
        disturbance: VehicleDisturbance {
            enabled: false,
            ..VehicleDisturbance::default()
        },
        ..VehiclePlant::default()
    };
    let x = [0.1, -0.2, 0.3, 0.0, 0.5, -0.6];
    let (mut a, mut b) = ([0.0; 6], [0.0; 6]);
    p.derivatives(0.3, &x, 1.0, &mut a);
    let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
    p.derivatives(0.7, &x2, 2.0, &mut b);
    for (p, q) in a.iter().zip(&b) {
        assert!((2.0 * p - q).abs() < 1e-9 * q.abs().max(1.0));
    }
}

fn settle(plant: &HeatExchangerPlant, u: f64) -> Vec<f64> {
    let dt = 0.45 * plant.rates().dx / plant.rates().hot_speed.max(plant.rates().cold_speed);
    let mut p = plant.clone();
    integrate(&mut p, |_| u, dt, (40.0 / dt) as usize)
}

#[test]
fn exchanger_reaches_its_discrete_steady_state() {
    let p = HeatExchangerPlant::default();
    let x = settle(&p, 200.0);
    let expected = p.steady_state(200.0);
    for (a, b) in x.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn exchanger_outlet_is_grid_independent() {
    let coarse = HeatExchangerPlant::default();
    let fine = HeatExchangerPlant {
        cells: 2 * coarse.cells,
        ..coarse.clone()
    };
    let a = coarse.output(&coarse.steady_state(330.0)) - coarse.cold_inlet;
    let b = fine.output(&fine.steady_state(330.0)) - fine.cold_inlet;
    assert!((a / b - 1.0).abs() < 0.01, "{a} vs {b}");
}

#[test]
fn exchanger_steady_state_conserves_energy() {
    for fouling in [
        Fouling::default(),
        Fouling {
            flow: 0.7,
            conduction: 0.5,
        },
    ] {
        let p = HeatExchangerPlant::default().with_fouling(fouling);
        let u = 330.0;
        let x = p.steady_state(u);
        let n = p.cells;
        let hot_loss = fouling.flow * p.hot_flow * p.hot_heat_capacity * (p.hot_inlet + u - x[n - 1]);
        let cold_gain = fouling.flow * p.cold_flow * p.cold_heat_capacity * (x[2 * n - 1] - p.cold_inlet);
        assert!(hot_loss > 0.0);
        assert!((hot_loss / cold_gain - 1.0).abs() < 1e-9, "{hot_loss} vs {cold_gain}");
    }
}

#[test]
fn exchanger_transfers_heat_from_hot_to_cold() {
    let p = HeatExchangerPlant::default();
    let n = p.cells;
    let mut x = vec![300.0; 2 * n];
    for v in &mut x[..n] {
        *v = 400.0;
    }
    for v in &mut x[n..] {
        *v = 300.0;
    }
    let mut dx = vec![0.0; 2 * n];
    heat_exchanger_derivs(&p, 400.0, &x, &mut dx);
    assert!(dx[..n].iter().all(|d| *d < 0.0));
    assert!(dx[n + 1..].iter().all(|d| *d > 0.0));
}

#[test]
fn fouling_slows_transport_and_exchange() {
    let p = HeatExchangerPlant::default();
    let f = p.with_fouling(Fouling {
        flow: 0.7,
        conduction: 0.5,
    });
    let (a, b) = (p.rates(), f.rates());
    assert!((b.hot_speed / a.hot_speed - 0.7).abs() < 1e-12);
    assert!((b.cold_exchange / a.cold_exchange - 0.5).abs() < 1e-12);
    assert!(Fouling {
        flow: 0.0,
        conduction: 1.0
    }
    .validate()
    .is_err());
    assert!(Fouling {
        flow: 1.0,
        conduction: 1.2
    }
    .validate()
    .is_err());
}

#[test]
fn exchanger_rejects_negative_temperatures() {
    let p = HeatExchangerPlant::default();
    let mut x = p.initial_state();
    assert!(p.check_state(&x).is_ok());
    x[3] = -1.0;
    assert!(p.check_state(&x).is_err());
}

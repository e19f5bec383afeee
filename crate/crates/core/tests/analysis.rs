use proptest::prelude::*;
use rollsim_core::analysis::{compare, ripple_stats, settle_time, waving_flag};
use rollsim_core::dynamics::{world_kinematics, Model, PlanarState, RobotParams};
use rollsim_core::integrate::{simulate, Channel, SimConfig, TorqueProfile, Trajectory};

fn from_samples(dt: f64, theta_dot: &[f64]) -> Trajectory {
    let p = RobotParams::default();
    let mut tr = Trajectory::default();
    let mut theta = 0.0;
    for (i, &v) in theta_dot.iter().enumerate() {
        theta += v * dt;
        let s = PlanarState::new(theta, v, 0.0, -v);
        tr.times.push(i as f64 * dt);
        tr.states.push(s);
        tr.torque.push(0.0);
        tr.energy.push(0.0);
        tr.kinematics.push(world_kinematics(&p, &s));
    }
    tr
}

fn pulse_run(model: Model, dt: f64, tau: f64, t_end: f64) -> Trajectory {
    let params = RobotParams::default();
    let config = SimConfig { dt, t_end, record_every: 1, model, initial_state: PlanarState::ZERO };
    simulate(&params, &config, &TorqueProfile::pulse(tau, 0.0, 1.0)).unwrap()
}

proptest! {
    #[test]
    fn ripple_ignores_constant_offsets(xs in prop::collection::vec(-5.0..5.0f64, 10..200), c in -100.0..100.0f64) {
        let a = from_samples(0.01, &xs);
        let shifted: Vec<f64> = xs.iter().map(|x| x + c).collect();
        let b = from_samples(0.01, &shifted);
        let ra = ripple_stats(&a, Channel::SphereVelocity, (0.0, 10.0)).unwrap();
        let rb = ripple_stats(&b, Channel::SphereVelocity, (0.0, 10.0)).unwrap();
        let tol = 1e-12 * (1.0 + c.abs());
        prop_assert!((ra.uphill_amplitude - rb.uphill_amplitude).abs() <= tol);
        prop_assert!((ra.downhill_amplitude - rb.downhill_amplitude).abs() <= tol);
        prop_assert!((ra.mean + c - rb.mean).abs() <= tol);
        prop_assert!(ra.uphill_amplitude >= 0.0 && ra.downhill_amplitude >= 0.0);
    }

    #[test]
    fn larger_threshold_never_settles_later(xs in prop::collection::vec(-1.0..1.0f64, 1..200), lo in 0.001..1.0f64, extra in 0.0..1.0f64) {
        let tr = from_samples(0.01, &xs);
        let tight = settle_time(&tr, Channel::SphereVelocity, lo);
        let loose = settle_time(&tr, Channel::SphereVelocity, lo + extra);
        if let Some(t) = tight {
            prop_assert!(loose.is_some_and(|l| l <= t));
        }
    }

    #[test]
    fn comparison_is_symmetric(
        xs in prop::collection::vec(-3.0..3.0f64, 2..100),
        ys in prop::collection::vec(-3.0..3.0f64, 2..100),
        dx in 0.005..0.05f64,
        dy in 0.005..0.05f64,
    ) {
        let a = from_samples(dx, &xs);
        let b = from_samples(dy, &ys);
        let ab = compare(&a, &b).unwrap();
        let ba = compare(&b, &a).unwrap();
        prop_assert_eq!(ab.samples, ba.samples);
        prop_assert_eq!(ab.overlap, ba.overlap);
        for (x, y) in ab.channels.iter().zip(&ba.channels) {
            prop_assert!((x.rms - y.rms).abs() <= 1e-12 * x.rms.max(1.0));
            prop_assert_eq!(x.final_delta().abs(), y.final_delta().abs());
        }
        prop_assert_eq!(ab.displacement_delta(), -ba.displacement_delta());
    }
}

#[test]
fn coarse_and_fine_steps_agree() {
    let coarse = pulse_run(Model::Frictionless, 1e-3, 1.0, 10.0);
    let fine = pulse_run(Model::Frictionless, 1e-4, 1.0, 10.0);
    let report = compare(&coarse, &fine).unwrap();
    assert!(report.state_rms <= 1e-5, "state RMS {:e}", report.state_rms);
    assert_eq!(report.overlap, (0.0, 10.0));
}

#[test]
fn friction_shortens_travel() {
    let free = pulse_run(Model::Frictionless, 1e-3, 1.0, 10.0);
    let damped = pulse_run(Model::Frictional, 1e-3, 1.0, 10.0);
    let report = compare(&free, &damped).unwrap();
    assert!(report.displacement_b < report.displacement_a, "{report:?}");
    assert!(report.verdicts.iter().any(|v| v.contains("travels less")));
}

#[test]
fn frictional_core_settles_and_frictionless_sphere_does_not() {
    let damped = pulse_run(Model::Frictional, 1e-3, 1.0, 10.0);
    let ts = settle_time(&damped, Channel::CoreVelocity, 0.01).expect("core velocity settles");
    assert!(ts > 1.0 && ts <= 6.0, "{ts}");
    let free = pulse_run(Model::Frictionless, 1e-3, 1.0, 10.0);
    assert_eq!(settle_time(&free, Channel::SphereVelocity, 0.01), None);
}

#[test]
fn pulse_ripple_is_bounded_and_waving_depends_on_torque() {
    let calm = pulse_run(Model::Frictionless, 1e-3, 1.0, 10.0);
    let r = ripple_stats(&calm, Channel::SphereVelocity, (2.0, 10.0)).unwrap();
    assert!(r.diagnostic.is_none(), "{r:?}");
    assert!(r.uphill_amplitude < r.mean.abs() && r.downhill_amplitude < r.mean.abs());
    assert!(!waving_flag(&calm, (2.0, 10.0)).unwrap().waving);

    let strong = pulse_run(Model::Frictionless, 1e-3, 6.0, 10.0);
    let w = waving_flag(&strong, (2.0, 10.0)).unwrap();
    assert!(w.waving, "{w:?}");
}

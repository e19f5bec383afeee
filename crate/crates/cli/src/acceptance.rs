//! The acceptance checks, one function per criterion. Each returns a
//! verdict with the measured numbers rather than panicking, so the CLI can
//! print the whole table and the test target can assert on each line.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rollsim_core::analysis::{compare, ripple_stats, settle_time, waving_flag};
use rollsim_core::dynamics::{
    inertia_core, inertia_sphere, lagrangian_gradient, mass_matrix_solve, state_derivative_frictional,
    state_derivative_frictionless, PlanarState, RobotParams,
};
use rollsim_core::integrate::{simulate, Channel, SimConfig, TorqueProfile, Trajectory};
use rollsim_core::locomotion::{
    first_gate_expr, gate_timing, next_mode, second_gate_expr, ForwardState, LocomotionData, ModeId, Side,
    FORWARD_CYCLE,
};
use rollsim_core::Model;

use crate::output::csv_string;
use crate::run::execute;
use crate::scenario::Scenario;
use crate::sweep::SweepParam;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {tag}  {}: {}", self.id, self.title, self.detail)
    }
}

fn verdict(id: u8, title: &'static str, checks: &[(bool, String)]) -> CriterionResult {
    let detail =
        checks.iter().map(|(ok, msg)| format!("{}{msg}", if *ok { "" } else { "[x] " })).collect::<Vec<_>>().join("; ");
    CriterionResult { id, title, pass: checks.iter().all(|(ok, _)| *ok), detail }
}

fn random_state(rng: &mut ChaCha8Rng) -> PlanarState {
    let ang = std::f64::consts::TAU;
    PlanarState::new(
        rng.gen_range(-ang..ang),
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-ang..ang),
        rng.gen_range(-10.0..10.0),
    )
}

fn rel_err(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1.0)
}

pub fn oracle_equivalence() -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = RobotParams::default();
    let mut worst: f64 = 0.0;
    let n = 1000;
    for _ in 0..n {
        let s = random_state(&mut rng);
        let tau = rng.gen_range(-10.0..10.0);
        let free = state_derivative_frictionless(&p, &s, tau).expect("valid state");
        let fric = state_derivative_frictional(&p, &s, tau).expect("valid state");
        let (a, b) = mass_matrix_solve(&p, &s, tau, 0.0).expect("valid state");
        let (c, d) = mass_matrix_solve(&p, &s, tau, p.zeta).expect("valid state");
        for e in [
            rel_err(free.theta_dot, a),
            rel_err(free.gamma_dot, b),
            rel_err(fric.theta_dot, c),
            rel_err(fric.gamma_dot, d),
        ] {
            worst = worst.max(e);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        1,
        "closed form vs mass-matrix solve",
        &[
            (worst <= 1e-9, format!("{n} samples, both models, max relative error {worst:.2e} (limit 1e-9)")),
            (elapsed < 1.0, format!("runtime {elapsed:.3} s (limit 1 s)")),
        ],
    )
}

pub fn energy_conservation() -> CriterionResult {
    let p = RobotParams::default().with_zeta(0.0);
    let x0 = PlanarState::new(0.0, 0.0, 2.0, 0.0);
    let config = SimConfig { dt: 1e-4, t_end: 10.0, record_every: 100, model: Model::Frictionless, initial_state: x0 };
    let start = Instant::now();
    let tr = simulate(&p, &config, &TorqueProfile::constant(0.0)).expect("free swing runs");
    let e0 = tr.energy[0];
    let drift = tr.energy.iter().map(|e| ((e - e0) / e0).abs()).fold(0.0, f64::max);
    verdict(
        2,
        "energy conservation",
        &[(
            drift <= 1e-6,
            format!(
                "max relative drift {drift:.2e} over 10 s at dt = 1e-4 (limit 1e-6, {:.2} s)",
                start.elapsed().as_secs_f64()
            ),
        )],
    )
}

// Lagrangian as kinetic minus potential energy of the shell and core
// velocity vectors, evaluated directly from the raw parameters.
fn lagrangian_from_vectors(p: &RobotParams, x: [f64; 4]) -> f64 {
    let [theta, theta_dot, gamma, gamma_dot] = x;
    let phi = theta + gamma;
    let phi_dot = theta_dot + gamma_dot;
    let vs = p.big_r * theta_dot;
    let vcy = p.big_r * theta_dot + p.r * phi_dot * phi.cos();
    let vcz = -p.r * phi_dot * phi.sin();
    0.5 * p.ms * vs * vs
        + 0.5 * p.is * theta_dot * theta_dot
        + 0.5 * p.mc * (vcy * vcy + vcz * vcz)
        + 0.5 * p.ic * phi_dot * phi_dot
        + p.mc * p.g * p.r * phi.cos()
}

pub fn gradient_check() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let p = RobotParams::default();
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s = random_state(&mut rng);
        let x = s.to_array();
        let g = lagrangian_gradient(&p, &s);
        let analytic = [g.d_theta, g.d_theta_dot, g.d_gamma, g.d_gamma_dot];
        for k in 0..4 {
            let (mut up, mut dn) = (x, x);
            up[k] += h;
            dn[k] -= h;
            let fd = (lagrangian_from_vectors(&p, up) - lagrangian_from_vectors(&p, dn)) / (2.0 * h);
            worst = worst.max((analytic[k] - fd).abs() / fd.abs().max(1e-3));
        }
    }
    verdict(
        3,
        "Lagrangian gradient vs central differences",
        &[(worst <= 1e-5, format!("100 points, 4 partials each, max relative error {worst:.2e} (limit 1e-5)"))],
    )
}

pub fn default_parameters() -> CriterionResult {
    let p = RobotParams::default();
    let table = [p.g == 9.8, p.ms == 3.0, p.mc == 1.0, p.big_r == 0.36, p.r == 0.317, p.is == 0.2592, p.ic == 0.0402];
    let is = inertia_sphere(p.ms, p.big_r).expect("valid");
    let ic = inertia_core(p.mc, p.r).expect("valid");
    verdict(
        4,
        "default parameter set",
        &[
            (table.iter().all(|&b| b), "g 9.8, Ms 3, mc 1, R 0.36, r 0.317, Is 0.2592, Ic 0.0402".to_string()),
            ((is - 0.2592).abs() <= 5e-5, format!("shell inertia from mass and radius {is:.6} (0.2592 ± 5e-5)")),
            ((ic - 0.0402).abs() <= 5e-5, format!("core inertia from mass and radius {ic:.6} (0.0402 ± 5e-5)")),
        ],
    )
}

fn shipped(name: &str) -> Scenario {
    Scenario::shipped_named(name).expect("shipped scenario exists")
}

fn run(s: &Scenario) -> Trajectory {
    execute(s).expect("scenario runs").trajectory
}

fn band_width(tr: &Trajectory, channel: Channel, t0: f64, t1: f64) -> f64 {
    let r = ripple_stats(tr, channel, (t0, t1)).expect("window has samples");
    r.peak_to_peak()
}

pub fn frictionless_pulse() -> CriterionResult {
    let tr = run(&shipped("pulse_frictionless"));
    let r = ripple_stats(&tr, Channel::SphereVelocity, (2.0, 10.0)).expect("window has samples");
    let w1 = band_width(&tr, Channel::Gamma, 2.0, 6.0);
    let w2 = band_width(&tr, Channel::Gamma, 6.0, 10.0);
    let change = (w1 - w2).abs() / w1.max(w2);
    verdict(
        5,
        "frictionless pulse response",
        &[
            (r.mean > 0.0, format!("sphere velocity mean over [2, 10] s = {:.4} rad/s (must be > 0)", r.mean)),
            (
                change <= 0.2,
                format!("core displacement band {w1:.4} rad on [2, 6] s vs {w2:.4} rad on [6, 10] s, change {:.1}% (limit 20%)", 100.0 * change),
            ),
        ],
    )
}

fn pulse_at(tau: f64) -> Trajectory {
    run(&SweepParam::Tau.apply(&shipped("pulse_frictionless"), tau))
}

pub fn ripple_asymmetry() -> CriterionResult {
    let r1 = ripple_stats(&pulse_at(1.0), Channel::SphereVelocity, (2.0, 10.0)).expect("window has samples");
    let r2 = ripple_stats(&pulse_at(2.0), Channel::SphereVelocity, (2.0, 10.0)).expect("window has samples");
    let (q1, q2) = (r1.ratio.unwrap_or(f64::NAN), r2.ratio.unwrap_or(f64::NAN));
    let spread = q1.max(q2) / q1.min(q2);
    verdict(
        6,
        "sphere velocity ripple asymmetry",
        &[
            (
                (0.05..=0.5).contains(&q1),
                format!(
                    "τ = 1: uphill {:.4}, downhill {:.4}, ratio {q1:.4} (band [0.05, 0.5])",
                    r1.uphill_amplitude, r1.downhill_amplitude
                ),
            ),
            (spread < 2.0, format!("τ = 2: ratio {q2:.4}, factor {spread:.4} from τ = 1 (limit 2)")),
        ],
    )
}

pub fn high_torque_waving() -> CriterionResult {
    let w6 = waving_flag(&pulse_at(6.0), (2.0, 10.0)).expect("window has samples");
    let w1 = waving_flag(&pulse_at(1.0), (2.0, 10.0)).expect("window has samples");
    verdict(
        7,
        "waving at high torque",
        &[
            (
                w6.waving,
                format!(
                    "τ = 6: swing/|mean| {:.3}, {} crossings, flag {}",
                    w6.excursion_ratio, w6.mean_crossings, w6.waving
                ),
            ),
            (
                !w1.waving,
                format!(
                    "τ = 1: swing/|mean| {:.3}, {} crossings, flag {}",
                    w1.excursion_ratio, w1.mean_crossings, w1.waving
                ),
            ),
        ],
    )
}

pub fn frictional_damping() -> CriterionResult {
    let damped = run(&shipped("pulse_frictional"));
    let free = run(&shipped("pulse_frictionless"));
    let settle = settle_time(&damped, Channel::CoreVelocity, 0.01);

    const TOL: f64 = 1e-6;
    let after: Vec<(f64, f64)> =
        damped.times.iter().zip(&damped.states).filter(|(t, _)| **t >= 1.0).map(|(t, s)| (*t, s.theta)).collect();
    let worst_drop = after.windows(2).map(|w| w[0].1 - w[1].1).fold(f64::NEG_INFINITY, f64::max);
    let first_drop = after.windows(2).find(|w| w[1].1 < w[0].1 - TOL).map(|w| w[1].0);

    let report = compare(&free, &damped).expect("runs overlap");
    verdict(
        8,
        "frictional damping",
        &[
            (
                settle.is_some_and(|t| t <= 6.0),
                format!("core velocity settles below 0.01 rad/s at {} (limit 6 s)", settle.map_or("never".to_string(), |t| format!("{t:.3} s"))),
            ),
            (
                first_drop.is_none(),
                match first_drop {
                    None => format!("sphere displacement non-decreasing after the pulse (largest step back {worst_drop:.2e})"),
                    Some(t) => format!(
                        "sphere displacement decreases after the pulse, first at t = {t:.3} s, largest single-sample drop {worst_drop:.2e} rad, θ(10) = {:.4} rad",
                        after.last().map_or(0.0, |x| x.1)
                    ),
                },
            ),
            (
                report.displacement_b < report.displacement_a,
                format!(
                    "net rotation |Δθ| frictional {:.4} rad vs frictionless {:.4} rad",
                    report.displacement_b, report.displacement_a
                ),
            ),
        ],
    )
}

pub fn zero_friction_reduction() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = RobotParams::default().with_zeta(0.0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let s = random_state(&mut rng);
        let tau = rng.gen_range(-10.0..10.0);
        let a = state_derivative_frictionless(&p, &s, tau).expect("valid state").to_array();
        let b = state_derivative_frictional(&p, &s, tau).expect("valid state").to_array();
        for k in 0..4 {
            worst = worst.max((a[k] - b[k]).abs());
        }
    }
    verdict(
        9,
        "zero friction reduces to the frictionless model",
        &[(worst <= 1e-14, format!("1000 samples, max abs difference {worst:.2e} (limit 1e-14)"))],
    )
}

pub fn gate_timing_check() -> CriterionResult {
    let (g1, g2) = gate_timing(0.0);
    let saturated = [1.5600001, 1.6, 2.0, 5.0, 10.0].iter().all(|&t| gate_timing(t) == (2.0, -2.0));
    let mut worst_excess: f64 = 0.0;
    for expr in [first_gate_expr(), second_gate_expr()] {
        let lip = expr.lipschitz_bound();
        let knots: Vec<f64> = expr.steps().iter().flat_map(|s| [s.x0, s.x1]).collect();
        for t in knots.into_iter().chain((0..2000).map(|i| i as f64 * 1e-3)) {
            for eps in [1e-6, 1e-7, 1e-8] {
                let jump = (expr.eval(t + eps) - expr.eval(t - eps)).abs();
                worst_excess = worst_excess.max(jump - lip * 2.0 * eps * (1.0 + 1e-6) - 1e-12);
            }
        }
    }
    verdict(
        10,
        "gate timing commands",
        &[
            ((g1 + 1.9).abs() < 1e-12, format!("first gate at t = 0: {g1}")),
            ((g2 - 1.9).abs() < 1e-12, format!("second gate at t = 0: {g2}")),
            (saturated, "saturated at (+2, −2) for t > 1.56".to_string()),
            (worst_excess <= 0.0, "no jump larger than the Lipschitz bound at ε = 1e-6, 1e-7, 1e-8".to_string()),
        ],
    )
}

const CYCLE_TABLE: [(&str, &str, &str, &str); 5] = [
    ("a", "I II II I", "I S O O", "MM"),
    ("b", "I I II II", "O I S O", "MM"),
    ("c", "II I I II", "S O I O", "MM"),
    ("d", "II II I I", "S O I O", "GB"),
    ("e", "II I I II", "I T S T", "EP"),
];

fn names<T: serde::Serialize>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| serde_json::to_value(x).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn forward_cycle() -> CriterionResult {
    let mismatches: Vec<String> = FORWARD_CYCLE
        .iter()
        .zip(CYCLE_TABLE)
        .filter_map(|(row, (mode, gates, ports, loc))| {
            let got = (names(&[row.mode]), names(&row.gates), names(&row.ports), names(&[row.core_location]));
            let want = (mode.to_string(), gates.to_string(), ports.to_string(), loc.to_string());
            (got != want).then(|| format!("mode {mode}: {got:?} != {want:?}"))
        })
        .collect();

    let mut closes = true;
    for side in [Side::Alpha, Side::Beta] {
        let mut s = ForwardState { mode: ModeId::A, side };
        for _ in 0..5 {
            let adv = next_mode(s, s.successor().representative_location(), 0.0);
            closes &= adv.advanced;
            s = adv.state;
        }
        closes &= s == ForwardState { mode: ModeId::A, side: side.flipped() };
    }

    let violations = LocomotionData::bundled().check();
    verdict(
        11,
        "forward cycle and gesture data",
        &[
            (
                mismatches.is_empty(),
                if mismatches.is_empty() { "5 schedule rows match".to_string() } else { mismatches.join(", ") },
            ),
            (closes, "a→b→c→d→e→a closes in 5 transitions and flips side".to_string()),
            (
                violations.is_empty(),
                format!(
                    "{} violations in shipped gesture data{}",
                    violations.len(),
                    violations.first().map_or(String::new(), |v| format!(" (first: {v})"))
                ),
            ),
        ],
    )
}

pub fn determinism_and_convergence() -> CriterionResult {
    let mut identical = Vec::new();
    for s in Scenario::shipped() {
        let a = csv_string(&run(&s));
        let b = csv_string(&run(&s));
        identical.push((s.name.clone(), a == b, a.len()));
    }
    let base = shipped("pulse_frictionless");
    let coarse = run(&SweepParam::Dt.apply(&base, 1e-3));
    let fine = run(&SweepParam::Dt.apply(&base, 1e-4));
    let rms = compare(&coarse, &fine).expect("runs overlap").state_rms;
    let all_same = identical.iter().all(|x| x.1);
    verdict(
        12,
        "determinism and step-size convergence",
        &[
            (
                all_same,
                format!(
                    "byte-identical CSV on repeat: {}",
                    identical
                        .iter()
                        .map(|(n, ok, len)| format!("{n} {} ({len} bytes)", if *ok { "yes" } else { "no" }))
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            ),
            (rms <= 1e-5, format!("state RMS dt = 1e-3 vs 1e-4: {rms:.2e} (limit 1e-5)")),
        ],
    )
}

/// Every criterion in order.
pub const CRITERIA: [fn() -> CriterionResult; 12] = [
    oracle_equivalence,
    energy_conservation,
    gradient_check,
    default_parameters,
    frictionless_pulse,
    ripple_asymmetry,
    high_torque_waving,
    frictional_damping,
    zero_friction_reduction,
    gate_timing_check,
    forward_cycle,
    determinism_and_convergence,
];

pub fn run_all() -> Vec<CriterionResult> {
    use rayon::prelude::*;
    CRITERIA.par_iter().map(|f| f()).collect()
}

//! Fixed-step RK4 integration under a time-varying torque.

mod torque;

use serde::{Deserialize, Serialize};

use crate::dynamics::{total_energy, world_kinematics, Dynamics, Model, PlanarState, RobotParams, WorldKinematics};
use crate::error::{ConfigError, DynamicsError, SimError, SimulationFailure};

pub use torque::{PiecewiseSegment, SmoothStep, StepExpr, TorqueProfile};

/// Largest step accepted by [`SimConfig::validate`] (s).
pub const MAX_DT: f64 = 0.01;
pub const DEFAULT_DT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub model: Model,
    pub initial_state: PlanarState,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            t_end: 10.0,
            record_every: 10,
            model: Model::Frictionless,
            initial_state: PlanarState::ZERO,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.dt > 0.0 && self.dt <= MAX_DT) {
            return Err(ConfigError::Invalid(format!("dt must lie in (0, {MAX_DT}], got {}", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(ConfigError::Invalid(format!("t_end must be positive, got {}", self.t_end)));
        }
        if self.record_every == 0 {
            return Err(ConfigError::Invalid("record_every must be at least 1".into()));
        }
        if self.dt * self.record_every as f64 > self.t_end {
            return Err(ConfigError::Invalid(format!(
                "sampling interval dt·record_every = {} exceeds t_end = {}",
                self.dt * self.record_every as f64,
                self.t_end
            )));
        }
        if !self.initial_state.is_finite() {
            return Err(ConfigError::Invalid("initial state must be finite".into()));
        }
        Ok(())
    }

    /// Number of integration steps needed to reach `t_end`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil() as usize
    }
}

/// Named per-sample channels of a [`Trajectory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Theta,
    #[serde(alias = "theta_dot")]
    SphereVelocity,
    Gamma,
    #[serde(alias = "gamma_dot")]
    CoreVelocity,
    Phase,
    Tau,
    Energy,
    SphereY,
    CoreY,
    CoreZ,
    #[serde(rename = "p_y")]
    MomentumY,
    #[serde(rename = "p_z")]
    MomentumZ,
}

impl Channel {
    pub const ALL: [Channel; 12] = [
        Channel::Theta,
        Channel::SphereVelocity,
        Channel::Gamma,
        Channel::CoreVelocity,
        Channel::Phase,
        Channel::Tau,
        Channel::Energy,
        Channel::SphereY,
        Channel::CoreY,
        Channel::CoreZ,
        Channel::MomentumY,
        Channel::MomentumZ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::Theta => "theta",
            Channel::SphereVelocity => "sphere_velocity",
            Channel::Gamma => "gamma",
            Channel::CoreVelocity => "core_velocity",
            Channel::Phase => "phase",
            Channel::Tau => "tau",
            Channel::Energy => "energy",
            Channel::SphereY => "sphere_y",
            Channel::CoreY => "core_y",
            Channel::CoreZ => "core_z",
            Channel::MomentumY => "p_y",
            Channel::MomentumZ => "p_z",
        }
    }
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Uniformly sampled run output. All channels have one entry per sample.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PlanarState>,
    pub torque: Vec<f64>,
    pub energy: Vec<f64>,
    pub kinematics: Vec<WorldKinematics>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&PlanarState> {
        self.states.last()
    }

    pub fn value(&self, channel: Channel, i: usize) -> f64 {
        let s = &self.states[i];
        let k = &self.kinematics[i];
        match channel {
            Channel::Theta => s.theta,
            Channel::SphereVelocity => s.theta_dot,
            Channel::Gamma => s.gamma,
            Channel::CoreVelocity => s.gamma_dot,
            Channel::Phase => s.phase(),
            Channel::Tau => self.torque[i],
            Channel::Energy => self.energy[i],
            Channel::SphereY => k.sphere_center.0,
            Channel::CoreY => k.core_center.0,
            Channel::CoreZ => k.core_center.1,
            Channel::MomentumY => k.system_momentum.0,
            Channel::MomentumZ => k.system_momentum.1,
        }
    }

    pub fn channel(&self, channel: Channel) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(channel, i)).collect()
    }

    fn push(&mut self, params: &RobotParams, t: f64, state: PlanarState, tau: f64) {
        self.times.push(t);
        self.states.push(state);
        self.torque.push(tau);
        self.energy.push(total_energy(params, &state));
        self.kinematics.push(world_kinematics(params, &state));
    }
}

/// One classical RK4 step from `t` to `t + dt`.
///
/// Stage torques are sampled at `t`, `t + dt/2` and the left limit at
/// `t + dt`, so a jump in the profile that lands on a step boundary is seen
/// by the step that follows it and not by the one that ends there.
pub fn rk4_step(
    dynamics: &Dynamics,
    model: Model,
    state: &PlanarState,
    t: f64,
    dt: f64,
    profile: &TorqueProfile,
) -> Result<PlanarState, DynamicsError> {
    let half = 0.5 * dt;
    let tau_start = profile.eval(t);
    let tau_mid = profile.eval(t + half);
    let tau_end = profile.eval_left(t + dt);

    let stage = |s: PlanarState, tau: f64| {
        if s.is_finite() {
            dynamics.derivative(model, &s, tau)
        } else {
            Err(DynamicsError::NonFiniteState { t })
        }
    };
    let k1 = stage(*state, tau_start)?;
    let k2 = stage(*state + half * k1, tau_mid)?;
    let k3 = stage(*state + half * k2, tau_mid)?;
    let k4 = stage(*state + dt * k3, tau_end)?;
    let next = *state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if next.is_finite() {
        Ok(next)
    } else {
        Err(DynamicsError::NonFiniteState { t: t + dt })
    }
}

/// Integrates from `t = 0` to `config.t_end`, recording every
/// `config.record_every` steps. On a numerical failure the samples gathered
/// so far come back inside the error.
pub fn simulate(
    params: &RobotParams,
    config: &SimConfig,
    profile: &TorqueProfile,
) -> Result<Trajectory, SimulationFailure> {
    let mut trajectory = Trajectory::default();
    let fail = |error: SimError, partial: Trajectory| SimulationFailure { error, partial: Box::new(partial) };

    if let Err(e) = config.validate() {
        return Err(fail(e.into(), trajectory));
    }
    if let Err(e) = profile.validate() {
        return Err(fail(ConfigError::Invalid(e).into(), trajectory));
    }
    let dynamics = match Dynamics::new(*params) {
        Ok(d) => d,
        Err(e) => return Err(fail(e.into(), trajectory)),
    };

    let steps = config.steps();
    trajectory.times.reserve(steps / config.record_every + 1);
    let mut state = config.initial_state;
    trajectory.push(params, 0.0, state, profile.eval(0.0));
    for i in 0..steps {
        let t = i as f64 * config.dt;
        state = match rk4_step(&dynamics, config.model, &state, t, config.dt, profile) {
            Ok(next) => next,
            Err(e) => return Err(fail(e.into(), trajectory)),
        };
        if (i + 1) % config.record_every == 0 {
            let t_next = (i + 1) as f64 * config.dt;
            trajectory.push(params, t_next, state, profile.eval(t_next));
        }
    }
    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn frictionless() -> Dynamics {
        Dynamics::new(RobotParams::default().with_zeta(0.0)).unwrap()
    }

    #[test]
    fn equilibrium_is_preserved() {
        let d = frictionless();
        let s = rk4_step(&d, Model::Frictionless, &PlanarState::ZERO, 0.0, 1e-3, &TorqueProfile::default()).unwrap();
        assert_eq!(s, PlanarState::ZERO);
    }

    #[test]
    fn step_doubling_agrees() {
        let d = frictionless();
        let profile = TorqueProfile::constant(1.0);
        let dt = 1e-4;
        let full = rk4_step(&d, Model::Frictionless, &PlanarState::ZERO, 0.0, dt, &profile).unwrap();
        let half = rk4_step(&d, Model::Frictionless, &PlanarState::ZERO, 0.0, dt / 2.0, &profile).unwrap();
        let two = rk4_step(&d, Model::Frictionless, &half, dt / 2.0, dt / 2.0, &profile).unwrap();
        for (a, b) in full.to_array().iter().zip(two.to_array()) {
            assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn single_step_error_shrinks_at_fifth_order() {
        let d = frictionless();
        let profile = TorqueProfile::constant(1.0);
        let start = PlanarState::new(0.2, 1.0, 0.5, -2.0);
        let reference = |h: f64| {
            let mut s = start;
            let n = 100;
            for i in 0..n {
                s = rk4_step(&d, Model::Frictionless, &s, i as f64 * h / n as f64, h / n as f64, &profile).unwrap();
            }
            s
        };
        let err = |h: f64| {
            let one = rk4_step(&d, Model::Frictionless, &start, 0.0, h, &profile).unwrap();
            let r = reference(h);
            one.to_array().iter().zip(r.to_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let ratio = err(0.02) / err(0.01);
        assert!(ratio > 16.0, "ratio {ratio}");
    }

    #[test]
    fn config_validation() {
        let d = SimConfig::default();
        assert!(d.validate().is_ok());
        assert!(SimConfig { dt: 0.02, ..d }.validate().is_err());
        assert!(SimConfig { record_every: 0, ..d }.validate().is_err());
        assert!(SimConfig { t_end: 1e-4, record_every: 10, ..d }.validate().is_err());
    }

    #[test]
    fn sample_grid_is_uniform() {
        let config = SimConfig { dt: 1e-3, t_end: 1.0, record_every: 10, ..SimConfig::default() };
        let traj = simulate(&RobotParams::default(), &config, &TorqueProfile::pulse(1.0, 0.0, 0.5)).unwrap();
        assert_eq!(traj.len(), 101);
        for w in traj.times.windows(2) {
            assert!((w[1] - w[0] - 0.01).abs() < 1e-12);
        }
        assert_eq!(traj.torque[0], 1.0);
        assert_eq!(*traj.torque.last().unwrap(), 0.0);
    }

    #[test]
    fn nonfinite_initial_state_is_rejected() {
        let config = SimConfig { initial_state: PlanarState::new(f64::NAN, 0.0, 0.0, 0.0), ..SimConfig::default() };
        let err = simulate(&RobotParams::default(), &config, &TorqueProfile::default()).unwrap_err();
        assert!(matches!(err.error, SimError::Config(_)));
        assert!(err.partial.is_empty());
    }

    #[test]
    fn divergence_aborts_with_partial_output() {
        let config = SimConfig { dt: 1e-3, t_end: 5.0, record_every: 1, ..SimConfig::default() };
        let profile = TorqueProfile::constant(1e300);
        let err = simulate(&RobotParams::default(), &config, &profile).unwrap_err();
        assert!(matches!(err.error, SimError::Dynamics(DynamicsError::NonFiniteState { .. })));
        assert!(!err.partial.is_empty());
    }

    #[test]
    fn stable_rest_stays_put() {
        let config = SimConfig { dt: 1e-3, t_end: 1.0, record_every: 100, ..SimConfig::default() };
        let traj = simulate(&RobotParams::default(), &config, &TorqueProfile::default()).unwrap();
        assert!(traj.states.iter().all(|s| *s == PlanarState::ZERO));
        let config = SimConfig { initial_state: PlanarState::new(0.0, 0.0, PI, 0.0), ..config };
        let traj = simulate(&RobotParams::default(), &config, &TorqueProfile::default()).unwrap();
        assert!(traj.states.iter().all(|s| s.theta.abs() < 1e-9 && (s.gamma - PI).abs() < 1e-9));
    }
}

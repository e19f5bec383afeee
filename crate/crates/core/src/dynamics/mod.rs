//! Planar equations of motion for the shell-and-core robot.
//!
//! Generalized coordinates are the shell roll angle θ and the core angle γ
//! measured inside the tube. Every angle-dependent term enters through the
//! phase φ = θ + γ.

mod energy;
mod motion;
mod params;

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

pub use energy::{
    arc_distance, lagrangian, lagrangian_gradient, total_energy, world_kinematics, LagrangianGradient, WorldKinematics,
};
pub use motion::{
    mass_matrix_solve, state_derivative_frictional, state_derivative_frictionless, Dynamics, MassMatrixForm, Model,
};
pub use params::{inertia_core, inertia_sphere, validate_and_derive, DerivedConstants, RobotParams};

/// `(θ, θ̇, γ, γ̇)`. Angles are cumulative and never wrapped.
///
/// The same layout is used for time derivatives `(θ̇, θ̈, γ̇, γ̈)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanarState {
    pub theta: f64,
    pub theta_dot: f64,
    pub gamma: f64,
    pub gamma_dot: f64,
}

impl PlanarState {
    pub const ZERO: PlanarState = PlanarState::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(theta: f64, theta_dot: f64, gamma: f64, gamma_dot: f64) -> Self {
        Self { theta, theta_dot, gamma, gamma_dot }
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.theta, self.theta_dot, self.gamma, self.gamma_dot]
    }

    pub fn phase(&self) -> f64 {
        self.theta + self.gamma
    }

    pub fn phase_rate(&self) -> f64 {
        self.theta_dot + self.gamma_dot
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

impl Add for PlanarState {
    type Output = PlanarState;

    fn add(self, rhs: PlanarState) -> PlanarState {
        PlanarState::new(
            self.theta + rhs.theta,
            self.theta_dot + rhs.theta_dot,
            self.gamma + rhs.gamma,
            self.gamma_dot + rhs.gamma_dot,
        )
    }
}

impl Mul<PlanarState> for f64 {
    type Output = PlanarState;

    fn mul(self, rhs: PlanarState) -> PlanarState {
        PlanarState::new(self * rhs.theta, self * rhs.theta_dot, self * rhs.gamma, self * rhs.gamma_dot)
    }
}

use serde::{Deserialize, Serialize};

use super::params::{validate_and_derive, DerivedConstants, RobotParams};
use super::PlanarState;
use crate::error::DynamicsError;

/// Which set of equations drives the state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    #[default]
    Frictionless,
    Frictional,
}

/// Validated parameters bundled with their derived constants, so the
/// integrator does not re-derive them at every stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dynamics {
    params: RobotParams,
    consts: DerivedConstants,
}

impl Dynamics {
    pub fn new(params: RobotParams) -> Result<Self, DynamicsError> {
        let consts = validate_and_derive(&params)?;
        Ok(Self { params, consts })
    }

    pub fn params(&self) -> &RobotParams {
        &self.params
    }

    pub fn constants(&self) -> &DerivedConstants {
        &self.consts
    }

    pub fn derivative(&self, model: Model, state: &PlanarState, tau: f64) -> Result<PlanarState, DynamicsError> {
        match model {
            Model::Frictionless => self.frictionless(state, tau),
            Model::Frictional => self.frictional(state, tau),
        }
    }

    /// Closed-form `(θ̇, θ̈, γ̇, γ̈)` without dissipation.
    pub fn frictionless(&self, state: &PlanarState, tau: f64) -> Result<PlanarState, DynamicsError> {
        let k = self.kernel(state)?;
        Ok(PlanarState::new(state.theta_dot, k.theta_ddot(tau), state.gamma_dot, k.gamma_ddot(tau)))
    }

    /// Closed-form derivative with viscous terms `ζθ̇` and `ζγ̇` on the two
    /// coordinates. The dissipative part is added on top of the
    /// frictionless accelerations, so `ζ = 0` reproduces them bit for bit.
    pub fn frictional(&self, state: &PlanarState, tau: f64) -> Result<PlanarState, DynamicsError> {
        let k = self.kernel(state)?;
        let zeta = self.params.zeta;
        let theta_friction = zeta * (state.gamma_dot * k.big_b - state.theta_dot * self.consts.d) / k.big_e;
        let gamma_friction = zeta * (state.theta_dot * k.big_b - state.gamma_dot * k.big_a) / k.big_e;
        Ok(PlanarState::new(
            state.theta_dot,
            k.theta_ddot(tau) + theta_friction,
            state.gamma_dot,
            k.gamma_ddot(tau) + gamma_friction,
        ))
    }

    fn kernel(&self, state: &PlanarState) -> Result<Kernel, DynamicsError> {
        let phi = state.phase();
        let (sin, cos) = phi.sin_cos();
        let DerivedConstants { a, b, d, .. } = self.consts;
        let big_a = a + 2.0 * b * cos;
        let big_b = d + b * cos;
        let big_e = big_a * d - big_b * big_b;
        if !(big_e > 0.0) {
            return Err(DynamicsError::SingularMassMatrix { det: big_e, phase: phi });
        }
        let rate = state.phase_rate();
        Ok(Kernel { consts: self.consts, sin, cos, big_a, big_b, big_e, c: rate * rate })
    }
}

struct Kernel {
    consts: DerivedConstants,
    sin: f64,
    cos: f64,
    big_a: f64,
    big_b: f64,
    big_e: f64,
    c: f64,
}

impl Kernel {
    fn theta_ddot(&self, tau: f64) -> f64 {
        let DerivedConstants { b, d, h, .. } = self.consts;
        b * self.sin * ((self.c * d + h * self.cos) / self.big_e) - (self.big_b / self.big_e) * tau
    }

    fn gamma_ddot(&self, tau: f64) -> f64 {
        let DerivedConstants { a, b, d, h } = self.consts;
        -self.sin * ((b * self.c * self.big_b + ((a - d) + b * self.cos) * h) / self.big_e)
            + (self.big_a / self.big_e) * tau
    }
}

pub fn state_derivative_frictionless(
    params: &RobotParams,
    state: &PlanarState,
    tau: f64,
) -> Result<PlanarState, DynamicsError> {
    Dynamics::new(*params)?.frictionless(state, tau)
}

pub fn state_derivative_frictional(
    params: &RobotParams,
    state: &PlanarState,
    tau: f64,
) -> Result<PlanarState, DynamicsError> {
    Dynamics::new(*params)?.frictional(state, tau)
}

/// `M·q̈ + N + G = [0, τ]ᵀ`, assembled entry by entry from the physical
/// parameters without going through the closed-form shorthands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassMatrixForm {
    pub m: [[f64; 2]; 2],
    pub n: [f64; 2],
    pub g: [f64; 2],
    pub tau: [f64; 2],
}

impl MassMatrixForm {
    pub fn assemble(params: &RobotParams, state: &PlanarState, tau: f64, zeta: f64) -> Self {
        let RobotParams { g, ms, mc, big_r, r, is, ic, .. } = *params;
        let phi = state.theta + state.gamma;
        let coupling = mc * big_r * r * phi.cos();
        let m11 = ms * big_r * big_r + is + mc * big_r * big_r + ic + mc * r * r + 2.0 * coupling;
        let m12 = ic + mc * r * r + coupling;
        let m22 = ic + mc * r * r;
        let rate = state.theta_dot + state.gamma_dot;
        let n11 = -(rate * rate) * mc * big_r * r * phi.sin() + zeta * state.theta_dot;
        let n21 = zeta * state.gamma_dot;
        let gravity = mc * g * r * phi.sin();
        Self { m: [[m11, m12], [m12, m22]], n: [n11, n21], g: [gravity, gravity], tau: [0.0, tau] }
    }

    pub fn determinant(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Direct 2×2 inverse. Rejects `det M ≤ 1e-12·(tr M)²`.
    pub fn solve(&self, phase: f64) -> Result<(f64, f64), DynamicsError> {
        let det = self.determinant();
        let trace = self.m[0][0] + self.m[1][1];
        if !(det > 1e-12 * trace * trace) {
            return Err(DynamicsError::SingularMassMatrix { det, phase });
        }
        let rhs0 = self.tau[0] - self.n[0] - self.g[0];
        let rhs1 = self.tau[1] - self.n[1] - self.g[1];
        let theta_ddot = (self.m[1][1] * rhs0 - self.m[0][1] * rhs1) / det;
        let gamma_ddot = (self.m[0][0] * rhs1 - self.m[1][0] * rhs0) / det;
        Ok((theta_ddot, gamma_ddot))
    }
}

/// Accelerations `(θ̈, γ̈)` from the mass-matrix form. Serves as the
/// reference for the closed-form derivatives.
pub fn mass_matrix_solve(
    params: &RobotParams,
    state: &PlanarState,
    tau: f64,
    zeta: f64,
) -> Result<(f64, f64), DynamicsError> {
    params.validate()?;
    MassMatrixForm::assemble(params, state, tau, zeta).solve(state.phase())
}

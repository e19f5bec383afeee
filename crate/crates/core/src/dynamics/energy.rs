use serde::{Deserialize, Serialize};

use super::params::RobotParams;
use super::PlanarState;

/// Kinetic plus potential energy (J).
///
/// Kinetic energy is built from the shell and core velocity vectors; the
/// potential is `−m_c·g·r·cos φ`, the sign that makes `L = Ek − Ep` carry
/// `+m_c·g·r·cos φ`.
pub fn total_energy(params: &RobotParams, state: &PlanarState) -> f64 {
    let RobotParams { g, ms, mc, big_r, r, is, ic, .. } = *params;
    let phi = state.phase();
    let phi_dot = state.phase_rate();
    let shell_speed = big_r * state.theta_dot;
    let core_vy = big_r * state.theta_dot + phi_dot * r * phi.cos();
    let core_vz = -phi_dot * r * phi.sin();
    let kinetic = 0.5 * ms * shell_speed * shell_speed
        + 0.5 * is * state.theta_dot * state.theta_dot
        + 0.5 * mc * (core_vy * core_vy + core_vz * core_vz)
        + 0.5 * ic * phi_dot * phi_dot;
    let potential = -mc * g * r * phi.cos();
    kinetic + potential
}

/// The factored Lagrangian
/// `½θ̇²[M_sR²+I_s+m_cR²] + ½φ̇²[I_c+m_cr²] + (θ̇γ̇+θ̇²)m_cRr·cos φ + m_cgr·cos φ`.
pub fn lagrangian(params: &RobotParams, state: &PlanarState) -> f64 {
    let RobotParams { g, ms, mc, big_r, r, is, ic, .. } = *params;
    let PlanarState { theta_dot, gamma_dot, .. } = *state;
    let phi = state.phase();
    let phi_dot = theta_dot + gamma_dot;
    0.5 * theta_dot * theta_dot * (ms * big_r * big_r + is + mc * big_r * big_r)
        + 0.5 * phi_dot * phi_dot * (ic + mc * r * r)
        + (theta_dot * gamma_dot + theta_dot * theta_dot) * mc * big_r * r * phi.cos()
        + mc * g * r * phi.cos()
}

/// Hand-derived partials of [`lagrangian`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagrangianGradient {
    pub d_theta: f64,
    pub d_gamma: f64,
    pub d_theta_dot: f64,
    pub d_gamma_dot: f64,
}

pub fn lagrangian_gradient(params: &RobotParams, state: &PlanarState) -> LagrangianGradient {
    let RobotParams { g, ms, mc, big_r, r, is, ic, .. } = *params;
    let PlanarState { theta_dot, gamma_dot, .. } = *state;
    let phi = state.phase();
    let (sin, cos) = phi.sin_cos();
    let coupling = mc * big_r * r;
    // L depends on θ and γ only through φ, so both angle partials coincide.
    let d_angle = -((theta_dot * gamma_dot + theta_dot * theta_dot) * coupling * sin + mc * g * r * sin);
    LagrangianGradient {
        d_theta: d_angle,
        d_gamma: d_angle,
        d_theta_dot: theta_dot * (ms * big_r * big_r + is + mc * big_r * big_r)
            + (theta_dot + gamma_dot) * (ic + mc * r * r)
            + (gamma_dot + 2.0 * theta_dot) * coupling * cos,
        d_gamma_dot: (theta_dot + gamma_dot) * (ic + mc * r * r) + theta_dot * coupling * cos,
    }
}

/// World-frame positions in the rolling plane, as `(y, z)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorldKinematics {
    pub sphere_center: (f64, f64),
    pub core_center: (f64, f64),
    pub core_velocity: (f64, f64),
    /// Linear momentum of shell plus core (kg·m/s).
    pub system_momentum: (f64, f64),
}

pub fn world_kinematics(params: &RobotParams, state: &PlanarState) -> WorldKinematics {
    let RobotParams { ms, mc, big_r, r, .. } = *params;
    let phi = state.phase();
    let phi_dot = state.phase_rate();
    let (sin, cos) = phi.sin_cos();
    let sphere_center = (big_r * state.theta, big_r);
    let core_center = (sphere_center.0 + r * sin, sphere_center.1 + r * cos);
    let core_velocity = (big_r * state.theta_dot + phi_dot * r * cos, -phi_dot * r * sin);
    let system_momentum = (ms * big_r * state.theta_dot + mc * core_velocity.0, mc * core_velocity.1);
    WorldKinematics { sphere_center, core_center, core_velocity, system_momentum }
}

/// Ground distance covered by a shell of radius `big_r` rolling through
/// `theta_deg` degrees.
pub fn arc_distance(big_r: f64, theta_deg: f64) -> f64 {
    2.0 * std::f64::consts::PI * big_r / 360.0 * theta_deg
}

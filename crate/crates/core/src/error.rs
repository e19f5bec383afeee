use thiserror::Error;

use crate::integrate::Trajectory;

/// Failures raised by the dynamics and integration layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("mass matrix singular or indefinite (det = {det:e}, phase = {phase})")]
    SingularMassMatrix { det: f64, phase: f64 },
    #[error("non-finite state at t = {t} s")]
    NonFiniteState { t: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid simulation config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// A failed run, carrying every sample recorded before the failure.
#[derive(Debug, Clone, Error)]
#[error("simulation aborted after {} samples: {error}", partial.len())]
pub struct SimulationFailure {
    pub error: SimError,
    pub partial: Box<Trajectory>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("analysis window [{t0}, {t1}] contains no samples")]
    EmptyWindow { t0: f64, t1: f64 },
    #[error("trajectories do not overlap in time")]
    NoOverlap,
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("failed to parse locomotion data: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid tube geometry: {0}")]
    Geometry(String),
}

//! Planar dynamics, integration, locomotion logic and trajectory analysis
//! for a spherical robot driven by a heavy core moving inside an internal
//! tube.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod integrate;
pub mod locomotion;

pub use dynamics::{Dynamics, Model, PlanarState, RobotParams};
pub use error::{AnalysisError, ConfigError, DataError, DynamicsError, SimError, SimulationFailure};
pub use integrate::{simulate, Channel, SimConfig, TorqueProfile, Trajectory};

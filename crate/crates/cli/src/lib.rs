//! Scenario-driven front end for the rolling-robot simulator: scenario
//! files, runs, parameter sweeps, CSV and report output, and the
//! acceptance checks.

pub mod acceptance;
pub mod output;
pub mod run;
pub mod scenario;
pub mod sweep;

//! Executes a scenario and gathers its analysis report.

use rollsim_core::analysis::{ripple_stats, settle_time, waving_flag, RippleStats, WavingReport};
use rollsim_core::dynamics::{Model, PlanarState};
use rollsim_core::integrate::{simulate, Channel, Trajectory};
use rollsim_core::SimulationFailure;
use serde::{Deserialize, Serialize};

use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettleResult {
    pub channel: Channel,
    pub threshold: f64,
    /// `None` when the channel never stays inside the threshold.
    pub time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub model: Model,
    pub samples: usize,
    pub t_end: f64,
    pub final_state: PlanarState,
    /// θ(end) − θ(0), rad.
    pub displacement: f64,
    pub energy_start: f64,
    pub energy_end: f64,
    pub ripple: Vec<RippleStats>,
    pub settle: Vec<SettleResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub waving: Option<WavingReport>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    pub report: RunReport,
}

pub fn execute(scenario: &Scenario) -> Result<RunOutput, SimulationFailure> {
    let trajectory = simulate(&scenario.params, &scenario.sim_config(), &scenario.torque)?;
    let report = analyse(scenario, &trajectory);
    Ok(RunOutput { trajectory, report })
}

pub fn analyse(scenario: &Scenario, traj: &Trajectory) -> RunReport {
    let window = scenario.analysis_window();
    let mut notes = Vec::new();
    let mut ripple = Vec::new();
    for &channel in &scenario.analysis.ripple {
        match ripple_stats(traj, channel, window) {
            Ok(r) => {
                if let Some(d) = &r.diagnostic {
                    notes.push(format!("ripple {channel}: {d}"));
                }
                ripple.push(r);
            }
            Err(e) => notes.push(format!("ripple {channel}: {e}")),
        }
    }
    let settle = scenario
        .analysis
        .settle
        .iter()
        .map(|req| SettleResult {
            channel: req.channel,
            threshold: req.threshold,
            time: settle_time(traj, req.channel, req.threshold),
        })
        .collect();
    let waving = if scenario.analysis.waving {
        match waving_flag(traj, window) {
            Ok(w) => Some(w),
            Err(e) => {
                notes.push(format!("waving: {e}"));
                None
            }
        }
    } else {
        None
    };

    let first = traj.states.first().copied().unwrap_or_default();
    let last = traj.states.last().copied().unwrap_or_default();
    RunReport {
        scenario: scenario.name.clone(),
        model: scenario.model,
        samples: traj.len(),
        t_end: traj.times.last().copied().unwrap_or(0.0),
        final_state: last,
        displacement: last.theta - first.theta,
        energy_start: traj.energy.first().copied().unwrap_or(0.0),
        energy_end: traj.energy.last().copied().unwrap_or(0.0),
        ripple,
        settle,
        waving,
        notes,
    }
}

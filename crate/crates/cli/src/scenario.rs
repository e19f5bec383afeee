//! Scenario files: one TOML document describing a single run.

use std::path::{Path, PathBuf};

use rollsim_core::dynamics::{Model, PlanarState, RobotParams};
use rollsim_core::integrate::{Channel, SimConfig, TorqueProfile, DEFAULT_DT};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable that overrides every scenario's output directory.
pub const OUTPUT_ENV: &str = "ROLLSIM_OUT";

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {error}")]
    Io { path: PathBuf, error: std::io::Error },
    #[error("{origin}: {error}")]
    Parse { origin: String, error: toml::de::Error },
    #[error("invalid scenario `{name}`:\n  {}", issues.join("\n  "))]
    Invalid { name: String, issues: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSettings {
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub initial_state: PlanarState,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self { dt: DEFAULT_DT, t_end: 10.0, record_every: 10, initial_state: PlanarState::ZERO }
    }
}

impl SimSettings {
    /// Time between recorded samples (s).
    pub fn sample_interval(&self) -> f64 {
        self.dt * self.record_every as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettleRequest {
    pub channel: Channel,
    pub threshold: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisRequests {
    /// Window for ripple and waving statistics; `[2, t_end]` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    pub ripple: Vec<Channel>,
    pub settle: Vec<SettleRequest>,
    pub waving: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub model: Model,
    #[serde(default)]
    pub sim: SimSettings,
    #[serde(default)]
    pub params: RobotParams,
    #[serde(default)]
    pub torque: TorqueProfile,
    #[serde(default)]
    pub analysis: AnalysisRequests,
}

fn default_output_dir() -> String {
    "out".to_string()
}

const SHIPPED: [(&str, &str); 3] = [
    ("pulse_frictionless", include_str!("../scenarios/pulse_frictionless.toml")),
    ("pulse_frictional", include_str!("../scenarios/pulse_frictional.toml")),
    ("free_swing", include_str!("../scenarios/free_swing.toml")),
];

impl Scenario {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ScenarioError> {
        let scenario: Scenario =
            toml::from_str(text).map_err(|error| ScenarioError::Parse { origin: origin.to_string(), error })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text =
            std::fs::read_to_string(path).map_err(|error| ScenarioError::Io { path: path.to_path_buf(), error })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes to TOML")
    }

    /// Scenarios bundled with the tool, by name.
    pub fn shipped() -> Vec<Scenario> {
        SHIPPED.iter().map(|(name, text)| Scenario::parse(text, name).expect("shipped scenario is valid")).collect()
    }

    pub fn shipped_named(name: &str) -> Option<Scenario> {
        Self::shipped().into_iter().find(|s| s.name == name)
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            dt: self.sim.dt,
            t_end: self.sim.t_end,
            record_every: self.sim.record_every,
            model: self.model,
            initial_state: self.sim.initial_state,
        }
    }

    pub fn analysis_window(&self) -> (f64, f64) {
        match self.analysis.window {
            Some([t0, t1]) => (t0, t1),
            None => (rollsim_core::analysis::DEFAULT_WINDOW_START.min(self.sim.t_end), self.sim.t_end),
        }
    }

    /// `ROLLSIM_OUT` if set, otherwise the scenario's own directory.
    pub fn output_path(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => PathBuf::from(&self.output_dir),
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mut issues = Vec::new();
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            issues
                .push(format!("name: `{}` must be non-empty and use only letters, digits, '-', '_' or '.'", self.name));
        }
        if let Err(e) = self.params.derive() {
            issues.push(format!("params: {e}"));
        }
        if let Err(e) = self.sim_config().validate() {
            issues.push(format!("sim: {e}"));
        }
        if let Err(e) = self.torque.validate() {
            issues.push(format!("torque: {e}"));
        }
        if let Some([t0, t1]) = self.analysis.window {
            if !(0.0 <= t0 && t0 < t1 && t1 <= self.sim.t_end) {
                issues.push(format!(
                    "analysis.window: [{t0}, {t1}] must satisfy 0 <= t0 < t1 <= t_end = {}",
                    self.sim.t_end
                ));
            }
        }
        for (i, s) in self.analysis.settle.iter().enumerate() {
            if !(s.threshold > 0.0 && s.threshold.is_finite()) {
                issues.push(format!("analysis.settle[{i}].threshold: must be positive, got {}", s.threshold));
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(ScenarioError::Invalid { name: self.name.clone(), issues })
        }
    }
}

//! Batch runs over one scalar parameter.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use rollsim_core::analysis::{compare, ComparisonReport};
use rollsim_core::integrate::Channel;
use serde::{Deserialize, Serialize};

use crate::run::{execute, RunOutput};
use crate::scenario::{Scenario, ScenarioError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// Drive level of the torque profile.
    Tau,
    Zeta,
    Dt,
    TEnd,
    G,
    Ms,
    Mc,
    BigR,
    R,
    Is,
    Ic,
}

impl SweepParam {
    pub const ALL: [SweepParam; 11] = [
        SweepParam::Tau,
        SweepParam::Zeta,
        SweepParam::Dt,
        SweepParam::TEnd,
        SweepParam::G,
        SweepParam::Ms,
        SweepParam::Mc,
        SweepParam::BigR,
        SweepParam::R,
        SweepParam::Is,
        SweepParam::Ic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Tau => "tau",
            SweepParam::Zeta => "zeta",
            SweepParam::Dt => "dt",
            SweepParam::TEnd => "t_end",
            SweepParam::G => "g",
            SweepParam::Ms => "ms",
            SweepParam::Mc => "mc",
            SweepParam::BigR => "R",
            SweepParam::R => "r",
            SweepParam::Is => "is",
            SweepParam::Ic => "ic",
        }
    }

    /// Copy of `base` with this parameter set to `value`. Changing `dt`
    /// keeps the time between recorded samples where it was, so runs at
    /// different step sizes share a sample grid.
    pub fn apply(self, base: &Scenario, value: f64) -> Scenario {
        let mut s = base.clone();
        s.name = format!("{}-{}-{}", base.name, self.name(), value);
        let p = &mut s.params;
        match self {
            SweepParam::Tau => s.torque = base.torque.with_amplitude(value),
            SweepParam::Zeta => p.zeta = value,
            SweepParam::Dt => {
                let interval = base.sim.sample_interval();
                s.sim.dt = value;
                s.sim.record_every = ((interval / value).round() as usize).max(1);
            }
            SweepParam::TEnd => s.sim.t_end = value,
            SweepParam::G => p.g = value,
            SweepParam::Ms => p.ms = value,
            SweepParam::Mc => p.mc = value,
            SweepParam::BigR => p.big_r = value,
            SweepParam::R => p.r = value,
            SweepParam::Is => p.is = value,
            SweepParam::Ic => p.ic = value,
        }
        s
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "big_r" {
            return Ok(SweepParam::BigR);
        }
        SweepParam::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let known: Vec<&str> = SweepParam::ALL.iter().map(|p| p.name()).collect();
            format!("unknown sweep parameter `{s}` (expected one of {})", known.join(", "))
        })
    }
}

#[derive(Debug, Clone)]
pub struct SweepRun {
    pub value: f64,
    pub scenario: Scenario,
    pub outcome: Result<RunOutput, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepComparison {
    pub reference: f64,
    pub value: f64,
    pub report: ComparisonReport,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub base: String,
    pub param: SweepParam,
    pub runs: Vec<SweepRun>,
    /// Each successful run against the first successful one.
    pub comparisons: Vec<SweepComparison>,
}

/// Builds and validates every variant before running any of them.
pub fn plan(base: &Scenario, param: SweepParam, values: &[f64]) -> Result<Vec<Scenario>, ScenarioError> {
    values
        .iter()
        .map(|&v| {
            let s = param.apply(base, v);
            s.validate().map(|_| s)
        })
        .collect()
}

/// Runs the variants in parallel; results keep the order of `values`.
pub fn run_sweep(base: &Scenario, param: SweepParam, values: &[f64]) -> Result<SweepOutcome, ScenarioError> {
    let scenarios = plan(base, param, values)?;
    let runs: Vec<SweepRun> = scenarios
        .into_par_iter()
        .zip(values.par_iter())
        .map(|(scenario, &value)| {
            let outcome = execute(&scenario).map_err(|e| e.to_string());
            eprintln!("  {} = {value}: {}", param, if outcome.is_ok() { "done" } else { "failed" });
            SweepRun { value, scenario, outcome }
        })
        .collect();

    let mut comparisons = Vec::new();
    let mut ok = runs.iter().filter_map(|r| r.outcome.as_ref().ok().map(|o| (r.value, o)));
    if let Some((v0, first)) = ok.next() {
        for (v, out) in ok {
            if let Ok(report) = compare(&first.trajectory, &out.trajectory) {
                comparisons.push(SweepComparison { reference: v0, value: v, report });
            }
        }
    }
    Ok(SweepOutcome { base: base.name.clone(), param, runs, comparisons })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub base: String,
    pub param: SweepParam,
    pub runs: Vec<SweepSummaryRow>,
    pub comparisons: Vec<SweepComparison>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummaryRow {
    pub value: f64,
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<crate::run::RunReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepOutcome {
    pub fn summary(&self) -> SweepSummary {
        SweepSummary {
            base: self.base.clone(),
            param: self.param,
            runs: self
                .runs
                .iter()
                .map(|r| SweepSummaryRow {
                    value: r.value,
                    scenario: r.scenario.name.clone(),
                    report: r.outcome.as_ref().ok().map(|o| o.report.clone()),
                    error: r.outcome.as_ref().err().cloned(),
                })
                .collect(),
            comparisons: self.comparisons.clone(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "sweep of {} over {} on {}", self.param, self.runs.len(), self.base).unwrap();
        writeln!(
            s,
            "{:>12}  {:>12}  {:>12}  {:>12}  {:>10}  {:>8}  {:>12}",
            self.param.name(),
            "mean",
            "uphill",
            "downhill",
            "ratio",
            "waving",
            "displacement"
        )
        .unwrap();
        for r in &self.runs {
            match &r.outcome {
                Ok(out) => {
                    let rep = &out.report;
                    let ripple = rep.ripple.iter().find(|x| x.channel == Channel::SphereVelocity);
                    let col = |f: &dyn Fn(&rollsim_core::analysis::RippleStats) -> Option<f64>| {
                        ripple.and_then(f).map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
                    };
                    let waving = rep.waving.as_ref().map_or("-", |w| if w.waving { "yes" } else { "no" });
                    writeln!(
                        s,
                        "{:>12}  {:>12}  {:>12}  {:>12}  {:>10}  {:>8}  {:>12.6}",
                        r.value,
                        col(&|x| Some(x.mean)),
                        col(&|x| Some(x.uphill_amplitude)),
                        col(&|x| Some(x.downhill_amplitude)),
                        col(&|x| x.ratio),
                        waving,
                        rep.displacement
                    )
                    .unwrap();
                }
                Err(e) => writeln!(s, "{:>12}  failed: {e}", r.value).unwrap(),
            }
        }
        for c in &self.comparisons {
            writeln!(
                s,
                "compare {} = {} vs {}: state RMS {:.3e}",
                self.param, c.value, c.reference, c.report.state_rms
            )
            .unwrap();
            for v in &c.report.verdicts {
                writeln!(s, "    {v}").unwrap();
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse() {
        for p in SweepParam::ALL {
            assert_eq!(p.name().parse::<SweepParam>().unwrap(), p);
        }
        assert_eq!("big_r".parse::<SweepParam>().unwrap(), SweepParam::BigR);
        assert!("mass".parse::<SweepParam>().unwrap_err().contains("tau"));
    }

    #[test]
    fn dt_sweep_keeps_sample_grid() {
        let base = Scenario::shipped_named("pulse_frictionless").unwrap();
        let coarse = SweepParam::Dt.apply(&base, 1e-3);
        assert_eq!(coarse.sim.record_every, 1);
        let fine = SweepParam::Dt.apply(&base, 1e-4);
        assert_eq!(fine.sim.record_every, 10);
        assert_eq!(coarse.name, "pulse_frictionless-dt-0.001");
    }

    #[test]
    fn tau_sweep_sets_pulse_level() {
        let base = Scenario::shipped_named("pulse_frictionless").unwrap();
        let s = SweepParam::Tau.apply(&base, 6.0);
        assert_eq!(s.torque.eval(0.5), 6.0);
        assert_eq!(s.torque.eval(1.5), 0.0);
    }

    #[test]
    fn invalid_variant_stops_the_sweep() {
        let base = Scenario::shipped_named("pulse_frictionless").unwrap();
        assert!(plan(&base, SweepParam::Dt, &[1e-3, 0.5]).is_err());
    }
}

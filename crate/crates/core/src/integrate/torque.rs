use serde::{Deserialize, Serialize};

/// Cubic smooth step: holds `h0` up to `x0`, `h1` from `x1` on, and blends
/// with `3Δ² − 2Δ³` in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothStep {
    pub x0: f64,
    pub h0: f64,
    pub x1: f64,
    pub h1: f64,
}

impl SmoothStep {
    /// Returns `None` unless `x1 > x0`.
    pub fn new(x0: f64, h0: f64, x1: f64, h1: f64) -> Option<Self> {
        (x1 > x0).then_some(Self { x0, h0, x1, h1 })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.x0 {
            self.h0
        } else if x >= self.x1 {
            self.h1
        } else {
            let delta = (x - self.x0) / (self.x1 - self.x0);
            self.h0 + (self.h1 - self.h0) * delta * delta * (3.0 - 2.0 * delta)
        }
    }

    /// Largest slope of the blend, `1.5·|h1 − h0| / (x1 − x0)`.
    pub fn max_slope(&self) -> f64 {
        1.5 * (self.h1 - self.h0).abs() / (self.x1 - self.x0)
    }
}

/// Expression tree of scaled and summed smooth steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum StepExpr {
    Const { value: f64 },
    Step(SmoothStep),
    Scale { factor: f64, expr: Box<StepExpr> },
    Sum { terms: Vec<StepExpr> },
}

impl StepExpr {
    pub fn step(x0: f64, h0: f64, x1: f64, h1: f64) -> Self {
        StepExpr::Step(SmoothStep { x0, h0, x1, h1 })
    }

    pub fn scale(factor: f64, expr: StepExpr) -> Self {
        StepExpr::Scale { factor, expr: Box::new(expr) }
    }

    pub fn sum(terms: Vec<StepExpr>) -> Self {
        StepExpr::Sum { terms }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            StepExpr::Const { value } => *value,
            StepExpr::Step(step) => step.eval(x),
            StepExpr::Scale { factor, expr } => factor * expr.eval(x),
            StepExpr::Sum { terms } => terms.iter().map(|t| t.eval(x)).sum(),
        }
    }

    /// Upper bound on `|d/dx|` of the whole expression.
    pub fn lipschitz_bound(&self) -> f64 {
        match self {
            StepExpr::Const { .. } => 0.0,
            StepExpr::Step(step) => step.max_slope(),
            StepExpr::Scale { factor, expr } => factor.abs() * expr.lipschitz_bound(),
            StepExpr::Sum { terms } => terms.iter().map(StepExpr::lipschitz_bound).sum(),
        }
    }

    /// Every step in the tree, for breakpoint inspection and validation.
    pub fn steps(&self) -> Vec<SmoothStep> {
        let mut out = Vec::new();
        self.collect_steps(&mut out);
        out
    }

    fn collect_steps(&self, out: &mut Vec<SmoothStep>) {
        match self {
            StepExpr::Const { .. } => {}
            StepExpr::Step(step) => out.push(*step),
            StepExpr::Scale { expr, .. } => expr.collect_steps(out),
            StepExpr::Sum { terms } => terms.iter().for_each(|t| t.collect_steps(out)),
        }
    }

    fn scaled(&self, factor: f64) -> StepExpr {
        StepExpr::scale(factor, self.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseSegment {
    pub t_start: f64,
    pub value: f64,
}

/// Input torque `τ(t)` on the core coordinate (N·m).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TorqueProfile {
    Constant {
        value: f64,
    },
    /// `amplitude` on `[start, start + duration)`, zero elsewhere.
    Pulse {
        amplitude: f64,
        start: f64,
        duration: f64,
    },
    /// Right-continuous; zero before the first segment starts.
    Piecewise {
        segments: Vec<PiecewiseSegment>,
    },
    SmoothStep {
        expr: StepExpr,
    },
}

impl Default for TorqueProfile {
    fn default() -> Self {
        TorqueProfile::Constant { value: 0.0 }
    }
}

impl TorqueProfile {
    pub fn pulse(amplitude: f64, start: f64, duration: f64) -> Self {
        TorqueProfile::Pulse { amplitude, start, duration }
    }

    pub fn constant(value: f64) -> Self {
        TorqueProfile::Constant { value }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TorqueProfile::Constant { value } => *value,
            TorqueProfile::Pulse { amplitude, start, duration } => {
                if *start <= t && t < start + duration {
                    *amplitude
                } else {
                    0.0
                }
            }
            TorqueProfile::Piecewise { segments } => {
                segments.iter().take_while(|s| s.t_start <= t).last().map_or(0.0, |s| s.value)
            }
            TorqueProfile::SmoothStep { expr } => expr.eval(t),
        }
    }

    /// Left limit `τ(t⁻)`. Equal to [`TorqueProfile::eval`] except exactly at
    /// a jump, where it returns the value held just before it.
    pub fn eval_left(&self, t: f64) -> f64 {
        match self {
            TorqueProfile::Pulse { amplitude, start, duration } => {
                if *start < t && t <= start + duration {
                    *amplitude
                } else {
                    0.0
                }
            }
            TorqueProfile::Piecewise { segments } => {
                segments.iter().take_while(|s| s.t_start < t).last().map_or(0.0, |s| s.value)
            }
            _ => self.eval(t),
        }
    }

    /// Sets the drive level: the value of a constant or pulse, or a
    /// multiplier for piecewise and smooth-step profiles.
    pub fn with_amplitude(&self, level: f64) -> TorqueProfile {
        match self {
            TorqueProfile::Constant { .. } => TorqueProfile::Constant { value: level },
            TorqueProfile::Pulse { start, duration, .. } => {
                TorqueProfile::Pulse { amplitude: level, start: *start, duration: *duration }
            }
            TorqueProfile::Piecewise { segments } => TorqueProfile::Piecewise {
                segments: segments
                    .iter()
                    .map(|s| PiecewiseSegment { t_start: s.t_start, value: s.value * level })
                    .collect(),
            },
            TorqueProfile::SmoothStep { expr } => TorqueProfile::SmoothStep { expr: expr.scaled(level) },
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            TorqueProfile::Constant { value } if !value.is_finite() => Err("constant torque is not finite".into()),
            TorqueProfile::Pulse { amplitude, start, duration } => {
                if !(amplitude.is_finite() && start.is_finite() && duration.is_finite()) {
                    Err("pulse fields must be finite".into())
                } else if *duration < 0.0 || *start < 0.0 {
                    Err("pulse start and duration must be non-negative".into())
                } else {
                    Ok(())
                }
            }
            TorqueProfile::Piecewise { segments } => {
                if segments.windows(2).any(|w| w[1].t_start <= w[0].t_start) {
                    Err("piecewise segment start times must strictly increase".into())
                } else if segments.iter().any(|s| !(s.t_start.is_finite() && s.value.is_finite())) {
                    Err("piecewise segments must be finite".into())
                } else {
                    Ok(())
                }
            }
            TorqueProfile::SmoothStep { expr } => {
                if expr.steps().iter().any(|s| !(s.x1 > s.x0)) {
                    Err("every smooth step needs x1 > x0".into())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

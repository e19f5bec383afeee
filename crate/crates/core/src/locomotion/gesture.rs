use std::fmt;

use serde::{Deserialize, Serialize};

use super::tube::{LocationClass, SegmentId, Side, TubeGeometry};
use crate::error::DataError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Motion {
    Forward,
    Circular,
    Angular,
    Slide,
    Jump,
}

/// Core positions in the forwarder tube (`ft`) and turner tube (`tt`).
/// Segment names are kept as text so bad names surface as violations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GestureStep {
    pub ft: String,
    pub tt: String,
    #[serde(default)]
    pub note: String,
}

impl GestureStep {
    pub fn new(ft: SegmentId, tt: SegmentId, note: &str) -> Self {
        Self { ft: ft.name().to_string(), tt: tt.name().to_string(), note: note.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GestureSequence {
    pub motion: Motion,
    pub steps: Vec<GestureStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub motion: Option<Motion>,
    /// Zero-based step index, when the problem is tied to one step.
    pub step: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(m) = self.motion {
            write!(f, "[{m:?}] ")?;
        }
        if let Some(i) = self.step {
            write!(f, "step {}: ", i + 1)?;
        }
        f.write_str(&self.message)
    }
}

pub fn validate_sequence(seq: &GestureSequence) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |step: Option<usize>, message: String| {
        out.push(Violation { motion: Some(seq.motion), step, message });
    };

    if seq.steps.is_empty() {
        push(None, "sequence has no steps".into());
        return out;
    }

    let mut parsed = Vec::with_capacity(seq.steps.len());
    for (i, step) in seq.steps.iter().enumerate() {
        let ft = step.ft.parse::<SegmentId>();
        let tt = step.tt.parse::<SegmentId>();
        for err in [&ft, &tt].into_iter().filter_map(|r| r.as_ref().err()) {
            push(Some(i), err.clone());
        }
        parsed.push(ft.ok().zip(tt.ok()));
    }

    for i in 1..seq.steps.len() {
        if seq.steps[i].ft == seq.steps[i - 1].ft && seq.steps[i].tt == seq.steps[i - 1].tt {
            push(Some(i), "repeats the previous step; at least one core must move".into());
        }
    }

    // Motion-specific rules need every segment name resolved.
    let Some(steps) = parsed.into_iter().collect::<Option<Vec<_>>>() else {
        return out;
    };
    match seq.motion {
        Motion::Forward => check_forward(&steps, &mut push),
        Motion::Slide => check_slide(&steps, &mut push),
        Motion::Jump => {
            if steps[0].1 != SegmentId::Ep {
                push(
                    Some(0),
                    format!("jump must start with the turner core at the equilibrium point, found {}", steps[0].1),
                );
            }
        }
        Motion::Circular | Motion::Angular => {}
    }
    out
}

// The forwarder core walks MM_X → GB_X → EP → MM_X' with X starting at α and
// flipping after every pass through the equilibrium point.
fn check_forward(steps: &[(SegmentId, SegmentId)], push: &mut impl FnMut(Option<usize>, String)) {
    let mut last_side: Option<Side> = None;
    for (i, w) in steps.windows(2).enumerate() {
        let (from, to) = (w[0].0, w[1].0);
        if from == to {
            continue;
        }
        let ok = match (from.class(), to.class()) {
            (LocationClass::EP, LocationClass::MM) => {
                let expected = last_side.map_or(Side::Alpha, Side::flipped);
                to.side() == Some(expected)
            }
            (LocationClass::MM, LocationClass::GB) => from.side() == to.side(),
            (LocationClass::GB, LocationClass::EP) => true,
            _ => false,
        };
        if to.class() == LocationClass::MM {
            last_side = to.side();
        }
        if !ok {
            push(Some(i + 1), format!("forwarder core moves {from} -> {to}, out of forward cycle order"));
        }
    }
}

fn check_slide(steps: &[(SegmentId, SegmentId)], push: &mut impl FnMut(Option<usize>, String)) {
    if steps.len() < 3 {
        push(None, format!("slide needs at least 3 steps, found {}", steps.len()));
        return;
    }
    for i in 1..3 {
        if steps[i].0 != steps[0].0 {
            push(
                Some(i),
                format!("forwarder core must hold at {} while the turner core moves, found {}", steps[0].0, steps[i].0),
            );
        }
    }
}

/// Shipped locomotion data: tube geometry plus one gesture sequence per
/// motion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocomotionData {
    pub geometry: TubeGeometry,
    #[serde(rename = "sequence", default)]
    pub sequences: Vec<GestureSequence>,
}

const BUNDLED: &str = include_str!("../../data/locomotion.toml");

impl LocomotionData {
    pub fn parse(text: &str) -> Result<Self, DataError> {
        Ok(toml::from_str(text)?)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled locomotion data parses")
    }

    pub fn bundled_text() -> &'static str {
        BUNDLED
    }

    pub fn sequence(&self, motion: Motion) -> Option<&GestureSequence> {
        self.sequences.iter().find(|s| s.motion == motion)
    }

    /// Geometry problems followed by every sequence violation.
    pub fn check(&self) -> Vec<Violation> {
        let mut out: Vec<Violation> = self
            .geometry
            .problems()
            .into_iter()
            .map(|message| Violation { motion: None, step: None, message: format!("geometry: {message}") })
            .collect();
        if self.sequences.is_empty() {
            out.push(Violation { motion: None, step: None, message: "no gesture sequences defined".into() });
        }
        for seq in &self.sequences {
            out.extend(validate_sequence(seq));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SegmentId::*;

    fn seq(motion: Motion, steps: &[(SegmentId, SegmentId)]) -> GestureSequence {
        GestureSequence { motion, steps: steps.iter().map(|(f, t)| GestureStep::new(*f, *t, "")).collect() }
    }

    #[test]
    fn bundled_data_is_clean() {
        let data = LocomotionData::bundled();
        assert_eq!(data.check(), Vec::<Violation>::new());
        for m in [Motion::Forward, Motion::Circular, Motion::Angular, Motion::Slide, Motion::Jump] {
            assert!(data.sequence(m).is_some(), "{m:?} missing");
        }
    }

    #[test]
    fn duplicate_step_is_one_violation() {
        let mut s = LocomotionData::bundled().sequence(Motion::Forward).unwrap().clone();
        let dup = s.steps[1].clone();
        s.steps.insert(1, dup);
        let v = validate_sequence(&s);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].step, Some(2));
    }

    #[test]
    fn jump_needs_turner_core_at_ep() {
        let v = validate_sequence(&seq(Motion::Jump, &[(Ep, MmAlpha), (MmAlpha, Ep)]));
        assert_eq!(v.len(), 1);
        assert!(v[0].message.contains("equilibrium point"));
    }

    #[test]
    fn forward_must_alternate() {
        let ok = seq(Motion::Forward, &[(Ep, Ep), (MmAlpha, Ep), (GbAlpha, Ep), (Ep, Ep), (MmBeta, Ep)]);
        assert!(validate_sequence(&ok).is_empty());
        let bad = seq(Motion::Forward, &[(Ep, Ep), (MmAlpha, Ep), (GbAlpha, Ep), (Ep, Ep), (MmAlpha, Ep)]);
        assert_eq!(validate_sequence(&bad).len(), 1);
        let skip = seq(Motion::Forward, &[(Ep, Ep), (MmAlpha, Ep), (Ep, Ep)]);
        assert_eq!(validate_sequence(&skip).len(), 1);
        let wrong_start = seq(Motion::Forward, &[(Ep, Ep), (MmBeta, Ep)]);
        assert_eq!(validate_sequence(&wrong_start).len(), 1);
    }

    #[test]
    fn slide_holds_forwarder_core() {
        let bad = seq(Motion::Slide, &[(Ep, Ep), (MmBeta, GbAlpha), (Ep, MmAlpha)]);
        assert_eq!(validate_sequence(&bad).len(), 1);
    }

    #[test]
    fn unknown_names_and_empty() {
        let s = GestureSequence {
            motion: Motion::Circular,
            steps: vec![GestureStep { ft: "MM_gamma".into(), tt: "EP".into(), note: String::new() }],
        };
        let v = validate_sequence(&s);
        assert_eq!(v.len(), 1);
        assert!(v[0].message.contains("MM_gamma"));
        let empty = GestureSequence { motion: Motion::Angular, steps: vec![] };
        assert_eq!(validate_sequence(&empty).len(), 1);
    }
}

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Named pieces of the forwarder tube circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SegmentId {
    #[serde(rename = "MM_alpha")]
    MmAlpha,
    #[serde(rename = "MM_beta")]
    MmBeta,
    #[serde(rename = "GB_alpha")]
    GbAlpha,
    #[serde(rename = "GB_beta")]
    GbBeta,
    #[serde(rename = "EP")]
    Ep,
}

/// Segment kind without the α/β side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocationClass {
    MM,
    GB,
    EP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Alpha,
    Beta,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Alpha => Side::Beta,
            Side::Beta => Side::Alpha,
        }
    }
}

impl SegmentId {
    pub const ALL: [SegmentId; 5] =
        [SegmentId::MmAlpha, SegmentId::MmBeta, SegmentId::GbAlpha, SegmentId::GbBeta, SegmentId::Ep];

    pub fn class(self) -> LocationClass {
        match self {
            SegmentId::MmAlpha | SegmentId::MmBeta => LocationClass::MM,
            SegmentId::GbAlpha | SegmentId::GbBeta => LocationClass::GB,
            SegmentId::Ep => LocationClass::EP,
        }
    }

    pub fn side(self) -> Option<Side> {
        match self {
            SegmentId::MmAlpha | SegmentId::GbAlpha => Some(Side::Alpha),
            SegmentId::MmBeta | SegmentId::GbBeta => Some(Side::Beta),
            SegmentId::Ep => None,
        }
    }

    pub fn momentum_maker(side: Side) -> SegmentId {
        match side {
            Side::Alpha => SegmentId::MmAlpha,
            Side::Beta => SegmentId::MmBeta,
        }
    }

    pub fn gravity_breaker(side: Side) -> SegmentId {
        match side {
            Side::Alpha => SegmentId::GbAlpha,
            Side::Beta => SegmentId::GbBeta,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SegmentId::MmAlpha => "MM_alpha",
            SegmentId::MmBeta => "MM_beta",
            SegmentId::GbAlpha => "GB_alpha",
            SegmentId::GbBeta => "GB_beta",
            SegmentId::Ep => "EP",
        }
    }
}

impl fmt::Display for SegmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SegmentId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SegmentId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| format!("unknown tube segment `{s}`"))
    }
}

/// Half-open arc `[start, end)` in radians. `end − start` is the arc
/// length; `start` may be negative to express an arc through zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeArc {
    pub segment: SegmentId,
    pub start: f64,
    pub end: f64,
}

impl TubeArc {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    fn offset(&self, phi: f64) -> f64 {
        (phi - self.start).rem_euclid(TAU)
    }

    pub fn contains(&self, phi: f64) -> bool {
        self.offset(phi) < self.length()
    }
}

pub const DEFAULT_EP_TOLERANCE: f64 = 0.02;
pub const DEFAULT_GB_HALF_WIDTH: f64 = 0.35;

/// A set of arcs partitioning the tube circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeGeometry {
    pub arcs: Vec<TubeArc>,
}

impl Default for TubeGeometry {
    fn default() -> Self {
        Self::symmetric(DEFAULT_EP_TOLERANCE, DEFAULT_GB_HALF_WIDTH)
    }
}

impl TubeGeometry {
    /// Equilibrium bands of half-width `ep` at 0 and π, gravity breakers
    /// out to `gb` on either side of them, momentum makers in between.
    /// Travelling in +φ the core sees EP, GB_β, MM_α, GB_α, EP, GB_α, MM_β,
    /// GB_β.
    pub fn symmetric(ep: f64, gb: f64) -> Self {
        let arc = |segment, start, end| TubeArc { segment, start, end };
        Self {
            arcs: vec![
                arc(SegmentId::Ep, -ep, ep),
                arc(SegmentId::GbBeta, ep, gb),
                arc(SegmentId::MmAlpha, gb, PI - gb),
                arc(SegmentId::GbAlpha, PI - gb, PI - ep),
                arc(SegmentId::Ep, PI - ep, PI + ep),
                arc(SegmentId::GbAlpha, PI + ep, PI + gb),
                arc(SegmentId::MmBeta, PI + gb, TAU - gb),
                arc(SegmentId::GbBeta, TAU - gb, TAU - ep),
            ],
        }
    }

    /// Lists every way the arcs fail to tile `[0, 2π)` exactly once.
    pub fn problems(&self) -> Vec<String> {
        const TOL: f64 = 1e-9;
        let mut out = Vec::new();
        if self.arcs.is_empty() {
            out.push("geometry has no arcs".to_string());
            return out;
        }
        for arc in &self.arcs {
            if !(arc.start.is_finite() && arc.end.is_finite()) || arc.length() <= 0.0 || arc.length() > TAU {
                out.push(format!("arc {} [{}, {}) has invalid bounds", arc.segment, arc.start, arc.end));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let total: f64 = self.arcs.iter().map(TubeArc::length).sum();
        if (total - TAU).abs() > TOL {
            out.push(format!("arc lengths sum to {total}, expected 2π"));
        }
        let mut sorted: Vec<(f64, f64, SegmentId)> =
            self.arcs.iter().map(|a| (a.start.rem_euclid(TAU), a.length(), a.segment)).collect();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
        for i in 0..sorted.len() {
            let (start, len, id) = sorted[i];
            let (next_start, _, next_id) = sorted[(i + 1) % sorted.len()];
            let gap = (next_start - (start + len)).rem_euclid(TAU);
            let gap = if gap > PI { gap - TAU } else { gap };
            if gap > TOL {
                out.push(format!("gap of {gap} rad between {id} and {next_id}"));
            } else if gap < -TOL {
                out.push(format!("{id} overlaps {next_id} by {} rad", -gap));
            }
        }
        for id in SegmentId::ALL {
            if !self.arcs.iter().any(|a| a.segment == id) {
                out.push(format!("segment {id} is missing"));
            }
        }
        out
    }

    pub fn is_partition(&self) -> bool {
        self.problems().is_empty()
    }

    /// Arc containing `phi` (taken modulo 2π). Falls back to the nearest arc
    /// start if the geometry leaves a gap.
    pub fn arc_at(&self, phi: f64) -> &TubeArc {
        self.arcs
            .iter()
            .find(|a| a.contains(phi))
            .or_else(|| {
                self.arcs.iter().min_by(|x, y| {
                    x.offset(phi).min(TAU - x.offset(phi)).total_cmp(&y.offset(phi).min(TAU - y.offset(phi)))
                })
            })
            .expect("geometry has at least one arc")
    }
}

/// Where the core sits: its segment and the fraction of that arc already
/// traversed in the +φ direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoreLocation {
    pub segment: SegmentId,
    pub progress: f64,
}

impl CoreLocation {
    pub fn new(segment: SegmentId, progress: f64) -> Self {
        Self { segment, progress }
    }
}

pub fn classify_core(phi: f64, geometry: &TubeGeometry) -> SegmentId {
    geometry.arc_at(phi).segment
}

pub fn locate_core(phi: f64, geometry: &TubeGeometry) -> CoreLocation {
    let arc = geometry.arc_at(phi);
    let progress = (arc.offset(phi) / arc.length()).clamp(0.0, 1.0);
    CoreLocation { segment: arc.segment, progress }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_geometry_is_a_partition() {
        assert_eq!(TubeGeometry::default().problems(), Vec::<String>::new());
    }

    #[test]
    fn classify_examples() {
        let g = TubeGeometry::default();
        assert_eq!(classify_core(0.0, &g), SegmentId::Ep);
        assert_eq!(classify_core(PI, &g), SegmentId::Ep);
        assert_eq!(classify_core(PI / 2.0, &g), SegmentId::MmAlpha);
        assert_eq!(classify_core(3.0 * PI / 2.0, &g), SegmentId::MmBeta);
        assert_eq!(classify_core(TAU + 0.01, &g), classify_core(0.01, &g));
        assert_eq!(classify_core(-0.01, &g), SegmentId::Ep);
        assert_eq!(classify_core(0.1, &g), SegmentId::GbBeta);
        assert_eq!(classify_core(PI - 0.1, &g), SegmentId::GbAlpha);
    }

    #[test]
    fn progress_runs_through_arc() {
        let g = TubeGeometry::default();
        let start = locate_core(DEFAULT_GB_HALF_WIDTH, &g);
        assert_eq!(start.segment, SegmentId::MmAlpha);
        assert!(start.progress < 1e-12);
        let mid = locate_core(PI / 2.0, &g);
        assert!((mid.progress - 0.5).abs() < 1e-12);
    }

    #[test]
    fn overlap_and_gap_detected() {
        let mut g = TubeGeometry::default();
        g.arcs[2].end += 0.1;
        assert!(!g.is_partition());
        let mut g = TubeGeometry::default();
        g.arcs.remove(4);
        let problems = g.problems();
        assert!(problems.iter().any(|p| p.contains("gap")), "{problems:?}");
    }

    #[test]
    fn segment_names_parse() {
        for id in SegmentId::ALL {
            assert_eq!(id.name().parse::<SegmentId>().unwrap(), id);
        }
        assert!("MM_gamma".parse::<SegmentId>().is_err());
    }
}

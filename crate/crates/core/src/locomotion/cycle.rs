use serde::{Deserialize, Serialize};

use super::tube::{CoreLocation, LocationClass, SegmentId, Side};
use crate::integrate::StepExpr;

/// Control gate function. `I` closes both paths; `II` and `III` each keep
/// one path open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateState {
    I,
    II,
    III,
}

/// Air port state: off, suction, injection, or tank-assisted
/// injection/suction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PortState {
    O,
    S,
    I,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeId {
    A,
    B,
    C,
    D,
    E,
}

impl ModeId {
    pub const ALL: [ModeId; 5] = [ModeId::A, ModeId::B, ModeId::C, ModeId::D, ModeId::E];

    pub fn next(self) -> ModeId {
        match self {
            ModeId::A => ModeId::B,
            ModeId::B => ModeId::C,
            ModeId::C => ModeId::D,
            ModeId::D => ModeId::E,
            ModeId::E => ModeId::A,
        }
    }

    pub fn row(self) -> &'static CycleMode {
        &FORWARD_CYCLE[self as usize]
    }
}

/// One row of the forward-motion gate/port schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleMode {
    pub mode: ModeId,
    pub gates: [GateState; 4],
    pub ports: [PortState; 4],
    pub core_location: LocationClass,
}

const fn row(mode: ModeId, gates: [GateState; 4], ports: [PortState; 4], core_location: LocationClass) -> CycleMode {
    CycleMode { mode, gates, ports, core_location }
}

/// Gates G1..G4 and ports P1..P4 for each mode of the forward cycle.
pub const FORWARD_CYCLE: [CycleMode; 5] = {
    use GateState::{I as GI, II as GII};
    use LocationClass::*;
    use PortState::{I as PI, O, S, T};
    [
        row(ModeId::A, [GI, GII, GII, GI], [PI, S, O, O], MM),
        row(ModeId::B, [GI, GI, GII, GII], [O, PI, S, O], MM),
        row(ModeId::C, [GII, GI, GI, GII], [S, O, PI, O], MM),
        row(ModeId::D, [GII, GII, GI, GI], [S, O, PI, O], GB),
        row(ModeId::E, [GII, GI, GI, GII], [PI, T, S, T], EP),
    ]
};

/// Fraction of the momentum-maker arc the core must pass before modes b
/// and c engage. The three MM rows split the arc into equal thirds.
pub const MM_THIRD: f64 = 1.0 / 3.0;

/// Holding a mode longer than this raises the stall diagnostic (s).
pub const STALL_AFTER: f64 = 5.0;

/// Forward controller state: the active row and which half of the tube
/// (α or β) the current cycle drives through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ForwardState {
    pub mode: ModeId,
    pub side: Side,
}

impl Default for ForwardState {
    fn default() -> Self {
        Self { mode: ModeId::A, side: Side::Alpha }
    }
}

impl ForwardState {
    pub fn row(&self) -> &'static CycleMode {
        self.mode.row()
    }

    /// The state the controller moves to once its entry condition holds.
    pub fn successor(&self) -> ForwardState {
        match self.mode {
            ModeId::E => ForwardState { mode: ModeId::A, side: self.side.flipped() },
            m => ForwardState { mode: m.next(), side: self.side },
        }
    }

    /// Core position that activates this state.
    pub fn entry_satisfied(&self, location: &CoreLocation) -> bool {
        let mm = SegmentId::momentum_maker(self.side);
        match self.mode {
            ModeId::A => location.segment == mm,
            ModeId::B => location.segment == mm && location.progress >= MM_THIRD,
            ModeId::C => location.segment == mm && location.progress >= 2.0 * MM_THIRD,
            ModeId::D => location.segment == SegmentId::gravity_breaker(self.side),
            ModeId::E => location.segment == SegmentId::Ep,
        }
    }

    /// A core location that satisfies this state's entry condition.
    pub fn representative_location(&self) -> CoreLocation {
        let mm = SegmentId::momentum_maker(self.side);
        match self.mode {
            ModeId::A => CoreLocation::new(mm, 0.1),
            ModeId::B => CoreLocation::new(mm, 0.5),
            ModeId::C => CoreLocation::new(mm, 0.9),
            ModeId::D => CoreLocation::new(SegmentId::gravity_breaker(self.side), 0.5),
            ModeId::E => CoreLocation::new(SegmentId::Ep, 0.5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeAdvance {
    pub state: ForwardState,
    pub advanced: bool,
    /// Set when the controller keeps holding a mode past [`STALL_AFTER`].
    pub stalled: bool,
}

/// Advances to the next row when the core reaches that row's position,
/// otherwise holds. Time in mode only feeds the stall flag.
pub fn next_mode(current: ForwardState, location: CoreLocation, elapsed_in_mode: f64) -> ModeAdvance {
    let candidate = current.successor();
    if candidate.entry_satisfied(&location) {
        ModeAdvance { state: candidate, advanced: true, stalled: false }
    } else {
        ModeAdvance { state: current, advanced: false, stalled: elapsed_in_mode > STALL_AFTER }
    }
}

/// Command expression for the first control gate.
pub fn first_gate_expr() -> StepExpr {
    StepExpr::scale(
        -2.0,
        StepExpr::sum(vec![
            StepExpr::step(0.001, 0.95, 0.002, 1.0),
            StepExpr::scale(-2.0, StepExpr::step(1.55, 0.0, 1.55001, 1.0)),
        ]),
    )
}

/// Command expression for the second control gate.
pub fn second_gate_expr() -> StepExpr {
    StepExpr::scale(
        2.0,
        StepExpr::sum(vec![
            StepExpr::step(0.001, 0.95, 0.002, 1.0),
            StepExpr::scale(-2.0, StepExpr::step(1.3, 0.0, 1.3001, 1.0)),
        ]),
    )
}

/// Open-loop gate commands at time `t`, as abstract scalars.
pub fn gate_timing(t: f64) -> (f64, f64) {
    (first_gate_expr().eval(t), second_gate_expr().eval(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_boundary_values() {
        let (g1, g2) = gate_timing(0.0);
        assert!((g1 + 1.9).abs() < 1e-12);
        assert!((g2 - 1.9).abs() < 1e-12);
        let (g1, g2) = gate_timing(1.0);
        assert_eq!((g1, g2), (-2.0, 2.0));
        let (g1, g2) = gate_timing(3.0);
        assert_eq!((g1, g2), (2.0, -2.0));
    }

    #[test]
    fn mode_a_holds_while_core_in_early_mm() {
        let s = ForwardState::default();
        let adv = next_mode(s, CoreLocation::new(SegmentId::MmAlpha, 0.1), 0.2);
        assert_eq!(adv.state, s);
        assert!(!adv.advanced && !adv.stalled);
        let adv = next_mode(s, CoreLocation::new(SegmentId::MmAlpha, 0.4), 0.3);
        assert_eq!(adv.state.mode, ModeId::B);
    }

    #[test]
    fn d_to_e_at_equilibrium_point() {
        let d = ForwardState { mode: ModeId::D, side: Side::Alpha };
        assert_eq!(next_mode(d, CoreLocation::new(SegmentId::GbAlpha, 0.5), 0.1).state, d);
        assert_eq!(next_mode(d, CoreLocation::new(SegmentId::Ep, 0.5), 0.1).state.mode, ModeId::E);
    }

    #[test]
    fn alternates_sides_each_cycle() {
        let mut s = ForwardState::default();
        for _ in 0..5 {
            s = next_mode(s, s.successor().representative_location(), 0.0).state;
        }
        assert_eq!(s, ForwardState { mode: ModeId::A, side: Side::Beta });
        let e = ForwardState { mode: ModeId::E, side: Side::Beta };
        let adv = next_mode(e, CoreLocation::new(SegmentId::MmBeta, 0.1), 0.0);
        assert!(!adv.advanced, "a β cycle must hand over to α");
        let adv = next_mode(e, CoreLocation::new(SegmentId::MmAlpha, 0.1), 0.0);
        assert_eq!(adv.state, ForwardState { mode: ModeId::A, side: Side::Alpha });
    }

    #[test]
    fn stall_flag_without_transition() {
        let s = ForwardState { mode: ModeId::C, side: Side::Alpha };
        let adv = next_mode(s, CoreLocation::new(SegmentId::MmAlpha, 0.95), 7.5);
        assert_eq!(adv.state, s);
        assert!(adv.stalled);
    }
}

//! Control logic: tube segmentation, the forward gate/port cycle, gate
//! timing commands and declarative gesture sequences for the other motions.
//!
//! Everything here is open loop; nothing is coupled to the integrator.

mod cycle;
mod gesture;
mod tube;

pub use cycle::{
    first_gate_expr, gate_timing, next_mode, second_gate_expr, CycleMode, ForwardState, GateState, ModeAdvance, ModeId,
    PortState, FORWARD_CYCLE, MM_THIRD, STALL_AFTER,
};
pub use gesture::{validate_sequence, GestureSequence, GestureStep, LocomotionData, Motion, Violation};
pub use tube::{
    classify_core, locate_core, CoreLocation, LocationClass, SegmentId, Side, TubeArc, TubeGeometry,
    DEFAULT_EP_TOLERANCE, DEFAULT_GB_HALF_WIDTH,
};

//! Phase schedules and the cut loci T_i = {t : z_i(t) on the cut of log^{eps_i}}.

mod admissible;
mod intersect;
mod schedule;
mod trace;

pub use admissible::{
    admissible, path_rows, search_schedule, AdmissibilityFailure, AdmissibilityReport, BranchData, ComponentLoci, Condition, PathRow,
};
pub use intersect::{find_pair_intersections, Crossing, TRANSVERSE_MIN};
pub use schedule::{
    equal_phase_schedule, make_operational_schedule, make_schedule, make_schedule_or_fallback, PhaseSchedule, ScheduleKind,
};
pub use trace::{cut_tolerance, trace_function, trace_wavefront, EndPoint, PathEnd, PathPoint, PathSample, TracedPath};

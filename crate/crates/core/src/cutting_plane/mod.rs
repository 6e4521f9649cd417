//! Cutting-plane solver for copositive programs.
//!
//! The outer approximation is an ellipsoid, or an interval for
//! one-dimensional programs where the ellipsoid update is undefined.

mod cut;
mod ellipsoid;
mod oracle;
mod solve;

pub use cut::{
    bisection_update, certificate_to_cut, classify_cut, Cut, CutKind, MbqpDual,
    SeparableProgram, Side, DEFAULT_CLASSIFY_TOL,
};
pub use ellipsoid::{determinant_ratio, ellipsoid_update, ellipsoid_volume, unit_ball_volume, Ellipsoid};
pub use oracle::{Escalation, OracleConfig, SolverChoice};
pub use solve::{
    run_cutting_plane, solve_cop, IterateRecord, PointVerdict, Region, SolveConfig, SolveReport,
    SolveStatus, DEFAULT_INTERVAL_GAP, MAX_CUTS_PER_ITERATION,
};

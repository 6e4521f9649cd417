use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::copositivity::{Certificate, CopositivityVerdict};
use crate::error::{Error, Result};
use crate::model::{DualPoint, Mbqp};

use super::cut::{bisection_update, CutKind, MbqpDual, SeparableProgram, Side};
use super::ellipsoid::{ellipsoid_update, unit_ball_volume, Ellipsoid};
use super::oracle::OracleConfig;

/// Default bound-gap tolerance for one-dimensional programs.
pub const DEFAULT_INTERVAL_GAP: f64 = 1e-6;
pub const MAX_CUTS_PER_ITERATION: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolveConfig {
    /// Radius `R` of the initial ball around the origin.
    pub initial_radius: f64,
    /// Stop once the outer approximation is smaller than a ball of this radius.
    pub target_radius: f64,
    pub max_iters: usize,
    /// Add up to five certificates per oracle call instead of one.
    pub multi_cut: bool,
    /// Stop once `upper - lower` falls to this value. In one dimension it
    /// defaults to [`DEFAULT_INTERVAL_GAP`]; otherwise only the volume
    /// criterion applies unless set.
    pub gap_tol: Option<f64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            initial_radius: 10.0,
            target_radius: 1e-6,
            max_iters: 2000,
            multi_cut: false,
            gap_tol: None,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_radius > 0.0 && self.initial_radius.is_finite()) {
            return Err(Error::InvalidArgument("initial radius must be positive".into()));
        }
        if !(self.target_radius > 0.0 && self.target_radius < self.initial_radius) {
            return Err(Error::InvalidArgument(
                "target radius must be positive and below the initial radius".into(),
            ));
        }
        if let Some(gap) = self.gap_tol {
            if !(gap >= 0.0) {
                return Err(Error::InvalidArgument("gap tolerance must be nonnegative".into()));
            }
        }
        Ok(())
    }
}

/// Starting outer approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Ball { center: Vec<f64>, radius: f64 },
    Interval { lo: f64, hi: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    /// The bound gap reached its tolerance.
    Converged,
    /// The outer approximation shrank below the target volume.
    TargetVolume,
    IterationLimit,
    /// The oracle errored; the report holds the bounds reached so far.
    OracleFailure(String),
    /// A certificate produced a cut with zero normal and negative right-hand
    /// side, so no dual point is feasible.
    DualInfeasible,
    /// The ellipsoid update broke down numerically.
    Degenerate(String),
    /// A feasible verdict contradicted earlier cuts, which can only happen
    /// when a grid-copositive point is not truly copositive.
    BoundsCrossed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointVerdict {
    Feasible,
    Infeasible,
    Neutral,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterateRecord {
    pub iteration: usize,
    pub point: Vec<f64>,
    pub verdict: PointVerdict,
    /// `zᵀMz` of the deepest certificate, or the grid minimum when feasible.
    pub certificate_value: f64,
    /// Volume (interval width in one dimension) after this iteration's cuts.
    pub volume: f64,
    pub lower: f64,
    pub upper: f64,
    pub oracle_time_s: f64,
    pub cuts_added: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// Best feasible test point found, in program coordinates.
    pub best_point: Option<Vec<f64>>,
    /// Final interval for one-dimensional programs.
    pub interval: Option<(f64, f64)>,
    /// Bounds on the optimal objective. The upper bound assumes the initial
    /// region contains an optimal point.
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub iterations: usize,
    pub oracle_calls: usize,
    pub oracle_time: f64,
    pub other_time: f64,
    pub total_time: f64,
    pub certificates_emitted: usize,
    /// Certificates that failed recomputation (`z >= 0`, `zᵀMz < 0`).
    pub certificate_violations: usize,
    pub history: Vec<IterateRecord>,
}

impl SolveReport {
    pub fn gap(&self) -> f64 {
        self.upper_bound - self.lower_bound
    }

    pub fn best_dual(&self, problem: &Mbqp) -> Option<DualPoint> {
        self.best_point
            .as_ref()
            .and_then(|p| DualPoint::from_slice(problem, p).ok())
    }

    /// `iteration,x0..x{m-1},verdict,certificate_value,volume,lower,upper,oracle_time_s`.
    pub fn history_csv(&self) -> String {
        let dim = self
            .history
            .first()
            .map(|r| r.point.len())
            .or_else(|| self.best_point.as_ref().map(Vec::len))
            .unwrap_or(0);
        let mut out = String::from("iteration");
        for i in 0..dim {
            let _ = write!(out, ",x{i}");
        }
        out.push_str(",verdict,certificate_value,volume,lower,upper,oracle_time_s\n");
        for r in &self.history {
            let _ = write!(out, "{}", r.iteration);
            for x in &r.point {
                let _ = write!(out, ",{x}");
            }
            let verdict = match r.verdict {
                PointVerdict::Feasible => "feasible",
                PointVerdict::Infeasible => "infeasible",
                PointVerdict::Neutral => "neutral",
            };
            let _ = writeln!(
                out,
                ",{verdict},{},{},{},{},{}",
                r.certificate_value, r.volume, r.lower, r.upper, r.oracle_time_s
            );
        }
        out
    }
}

fn certificate_is_sound(cert: &Certificate, m: &crate::matrix::SymMatrix) -> bool {
    cert.z.iter().all(|&v| v >= 0.0) && m.quad_form(&cert.z) < 0.0
}

enum Outcome {
    Feasible(f64),
    /// Cuts in priority order, with the value of the first.
    Cuts(Vec<super::Cut>, f64, PointVerdict),
}

struct Tally {
    oracle_time: f64,
    oracle_calls: usize,
    emitted: usize,
    violations: usize,
}

fn query(
    program: &dyn SeparableProgram,
    oracle: &OracleConfig,
    point: &[f64],
    max_cuts: usize,
    tally: &mut Tally,
) -> Result<(Outcome, f64), SolveStatus> {
    let m = program
        .matrix_at(point)
        .map_err(|e| SolveStatus::OracleFailure(e.to_string()))?;
    let start = Instant::now();
    let checked = oracle.check(&m);
    let elapsed = start.elapsed().as_secs_f64();
    tally.oracle_time += elapsed;
    let (check, calls) = checked.map_err(|e| SolveStatus::OracleFailure(e.to_string()))?;
    tally.oracle_calls += calls;

    match &check.verdict {
        CopositivityVerdict::Certificate(first) => {
            let mut cuts = Vec::new();
            for cert in check.certificates.iter().take(max_cuts) {
                tally.emitted += 1;
                if !certificate_is_sound(cert, &m) {
                    tally.violations += 1;
                    continue;
                }
                let cut = program
                    .cut_from_certificate(cert)
                    .map_err(|e| SolveStatus::OracleFailure(e.to_string()))?;
                cuts.push(cut);
            }
            if cuts.is_empty() {
                return Err(SolveStatus::OracleFailure(
                    "no certificate survived recomputation".into(),
                ));
            }
            Ok((Outcome::Cuts(cuts, first.value, PointVerdict::Infeasible), elapsed))
        }
        CopositivityVerdict::Copositive {
            certified_minimum_over_grid,
            boundary,
        } => {
            if let Some(z) = boundary {
                let cert = Certificate {
                    z: z.clone(),
                    value: 0.0,
                };
                let mut cut = program
                    .cut_from_certificate(&cert)
                    .map_err(|e| SolveStatus::OracleFailure(e.to_string()))?;
                if !cut.is_zero() {
                    cut.kind = CutKind::Neutral;
                    return Ok((Outcome::Cuts(vec![cut], 0.0, PointVerdict::Neutral), elapsed));
                }
            }
            Ok((Outcome::Feasible(*certified_minimum_over_grid), elapsed))
        }
    }
}

/// Runs the cutting-plane loop on `program` from `region`.
///
/// Test points are the ellipsoid center, or the interval midpoint in one
/// dimension. Infeasible points get the certificate's cut; feasible points
/// raise the lower bound and get an objective cut that discards everything
/// with a smaller objective.
pub fn run_cutting_plane(
    program: &dyn SeparableProgram,
    region: Region,
    oracle: &OracleConfig,
    config: &SolveConfig,
) -> Result<SolveReport> {
    config.validate()?;
    let dim = program.dim();
    let g = program.objective_gradient();
    if g.len() != dim {
        return Err(Error::DimensionMismatch {
            field: "objective gradient",
            expected: dim,
            found: g.len(),
        });
    }
    match region {
        Region::Interval { lo, hi } => {
            if dim != 1 {
                return Err(Error::InvalidArgument("interval regions need a 1-D program".into()));
            }
            if !(lo <= hi) {
                return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
            }
            Ok(run_interval(program, lo, hi, g[0], oracle, config))
        }
        Region::Ball { center, radius } => {
            if center.len() != dim {
                return Err(Error::DimensionMismatch {
                    field: "initial center",
                    expected: dim,
                    found: center.len(),
                });
            }
            if dim < 2 {
                return Err(Error::InvalidArgument(
                    "ellipsoid method needs dimension >= 2; use an interval".into(),
                ));
            }
            let e = Ellipsoid::ball(center, radius)?;
            Ok(run_ellipsoid(program, e, &g, oracle, config))
        }
    }
}

fn run_interval(
    program: &dyn SeparableProgram,
    mut lo: f64,
    mut hi: f64,
    g: f64,
    oracle: &OracleConfig,
    config: &SolveConfig,
) -> SolveReport {
    let start = Instant::now();
    let constant = program.objective_constant();
    let gap_tol = config.gap_tol.unwrap_or(DEFAULT_INTERVAL_GAP);
    let support = |lo: f64, hi: f64| (g * lo).max(g * hi) + constant;

    let mut tally = Tally {
        oracle_time: 0.0,
        oracle_calls: 0,
        emitted: 0,
        violations: 0,
    };
    let mut lower = f64::NEG_INFINITY;
    let mut upper = support(lo, hi);
    let mut best = None;
    let mut history = Vec::new();
    let mut status = None;

    for iteration in 0..config.max_iters {
        if (hi - lo) * g.abs() <= gap_tol || g == 0.0 {
            status = Some(SolveStatus::Converged);
            break;
        }
        let mid = 0.5 * (lo + hi);
        let (outcome, oracle_time) = match query(program, oracle, &[mid], 1, &mut tally) {
            Ok(v) => v,
            Err(s) => {
                status = Some(s);
                break;
            }
        };
        let (side, verdict, value) = match outcome {
            Outcome::Feasible(value) => {
                let obj = g * mid + constant;
                if obj > lower {
                    lower = obj;
                    best = Some(vec![mid]);
                }
                let side = if g > 0.0 { Side::Above } else { Side::Below };
                (side, PointVerdict::Feasible, value)
            }
            Outcome::Cuts(cuts, value, verdict) => {
                let cut = &cuts[0];
                if cut.is_zero() {
                    status = Some(SolveStatus::DualInfeasible);
                    break;
                }
                let side = if cut.a[0] > 0.0 { Side::Below } else { Side::Above };
                (side, verdict, value)
            }
        };
        (lo, hi) = bisection_update((lo, hi), side, mid).expect("midpoint lies in its interval");
        upper = upper.min(support(lo, hi));
        history.push(IterateRecord {
            iteration,
            point: vec![mid],
            verdict,
            certificate_value: value,
            volume: hi - lo,
            lower,
            upper,
            oracle_time_s: oracle_time,
            cuts_added: 1,
        });
        if lower > upper {
            status = Some(SolveStatus::BoundsCrossed);
            break;
        }
    }
    let status = status.unwrap_or_else(|| {
        if (hi - lo) * g.abs() <= gap_tol {
            SolveStatus::Converged
        } else {
            SolveStatus::IterationLimit
        }
    });
    finish(status, best, Some((lo, hi)), lower, upper, history, tally, start)
}

fn run_ellipsoid(
    program: &dyn SeparableProgram,
    mut e: Ellipsoid,
    g: &[f64],
    oracle: &OracleConfig,
    config: &SolveConfig,
) -> SolveReport {
    let start = Instant::now();
    let dim = e.dim();
    let constant = program.objective_constant();
    let target_volume = unit_ball_volume(dim) * config.target_radius.powi(dim as i32);
    let max_cuts = if config.multi_cut {
        MAX_CUTS_PER_ITERATION
    } else {
        1
    };
    let objective_normal: Vec<f64> = g.iter().map(|v| -v).collect();

    let mut tally = Tally {
        oracle_time: 0.0,
        oracle_calls: 0,
        emitted: 0,
        violations: 0,
    };
    let mut lower = f64::NEG_INFINITY;
    let mut upper = e.support(g) + constant;
    let mut best = None;
    let mut history = Vec::new();
    let mut status = None;

    for iteration in 0..config.max_iters {
        if let Some(s) = stop_reason(&e, lower, upper, target_volume, config.gap_tol) {
            status = Some(s);
            break;
        }
        let x = e.center().to_vec();
        let (outcome, oracle_time) = match query(program, oracle, &x, max_cuts, &mut tally) {
            Ok(v) => v,
            Err(s) => {
                status = Some(s);
                break;
            }
        };

        let mut cuts_added = 0;
        let (verdict, value) = match outcome {
            Outcome::Feasible(value) => {
                let obj = program.objective(&x);
                if obj > lower {
                    lower = obj;
                    best = Some(x.clone());
                }
                match ellipsoid_update(&e, &objective_normal) {
                    Ok(next) => {
                        e = next;
                        cuts_added = 1;
                    }
                    Err(err) => status = Some(SolveStatus::Degenerate(err.to_string())),
                }
                (PointVerdict::Feasible, value)
            }
            Outcome::Cuts(cuts, value, verdict) => {
                if cuts[0].is_zero() {
                    status = Some(SolveStatus::DualInfeasible);
                }
                for (k, cut) in cuts.iter().enumerate() {
                    if status.is_some() || cut.is_zero() {
                        break;
                    }
                    // later cuts are applied only while they still separate the moved center
                    if k > 0 && cut.slack(e.center()) > 0.0 {
                        continue;
                    }
                    match ellipsoid_update(&e, &cut.a) {
                        Ok(next) => {
                            e = next;
                            cuts_added += 1;
                        }
                        Err(err) => status = Some(SolveStatus::Degenerate(err.to_string())),
                    }
                }
                (verdict, value)
            }
        };
        upper = upper.min(e.support(g) + constant);
        history.push(IterateRecord {
            iteration,
            point: x,
            verdict,
            certificate_value: value,
            volume: e.volume().unwrap_or(f64::NAN),
            lower,
            upper,
            oracle_time_s: oracle_time,
            cuts_added,
        });
        if status.is_some() {
            break;
        }
        if lower > upper {
            status = Some(SolveStatus::BoundsCrossed);
            break;
        }
    }
    let status = status.unwrap_or_else(|| {
        stop_reason(&e, lower, upper, target_volume, config.gap_tol)
            .unwrap_or(SolveStatus::IterationLimit)
    });
    finish(status, best, None, lower, upper, history, tally, start)
}

fn stop_reason(
    e: &Ellipsoid,
    lower: f64,
    upper: f64,
    target_volume: f64,
    gap_tol: Option<f64>,
) -> Option<SolveStatus> {
    if let Some(gap) = gap_tol {
        if upper - lower <= gap {
            return Some(SolveStatus::Converged);
        }
    }
    match e.volume() {
        Ok(v) if v < target_volume => Some(SolveStatus::TargetVolume),
        Ok(_) => None,
        Err(err) => Some(SolveStatus::Degenerate(err.to_string())),
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    status: SolveStatus,
    best_point: Option<Vec<f64>>,
    interval: Option<(f64, f64)>,
    lower: f64,
    upper: f64,
    history: Vec<IterateRecord>,
    tally: Tally,
    start: Instant,
) -> SolveReport {
    let total_time = start.elapsed().as_secs_f64();
    SolveReport {
        status,
        best_point,
        interval,
        lower_bound: lower,
        upper_bound: upper,
        iterations: history.len(),
        oracle_calls: tally.oracle_calls,
        oracle_time: tally.oracle_time,
        other_time: (total_time - tally.oracle_time).max(0.0),
        total_time,
        certificates_emitted: tally.emitted,
        certificate_violations: tally.violations,
        history,
    }
}

/// Solves the copositive dual of `problem` from a ball of radius
/// `config.initial_radius` around the origin (an interval when the dual is
/// one-dimensional).
pub fn solve_cop(problem: &Mbqp, oracle: &OracleConfig, config: &SolveConfig) -> Result<SolveReport> {
    problem.validate()?;
    let program = MbqpDual::new(problem);
    let r = config.initial_radius;
    let region = if program.dim() == 1 {
        Region::Interval { lo: -r, hi: r }
    } else {
        Region::Ball {
            center: vec![0.0; program.dim()],
            radius: r,
        }
    };
    run_cutting_plane(&program, region, oracle, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SymMatrix;

    fn ex() -> Mbqp {
        Mbqp::new(
            SymMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 0.0]]).unwrap(),
            vec![0.0, 0.0],
            vec![vec![1.0, 1.0]],
            vec![1.0],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn zero_iterations_report_initial_bounds() {
        let config = SolveConfig {
            initial_radius: 2.0,
            max_iters: 0,
            ..SolveConfig::default()
        };
        let report = solve_cop(&ex(), &OracleConfig::exact(2), &config).unwrap();
        assert_eq!(report.status, SolveStatus::IterationLimit);
        assert_eq!(report.lower_bound, f64::NEG_INFINITY);
        // |g| = |(1, 1, 1)| = √3
        assert!((report.upper_bound - 2.0 * 3f64.sqrt()).abs() < 1e-12);
        assert!(report.history.is_empty());
    }

    #[test]
    fn ex_mbqp_brackets_optimum() {
        let config = SolveConfig {
            initial_radius: 20.0,
            target_radius: 1e-4,
            max_iters: 400,
            multi_cut: false,
            gap_tol: Some(5e-3),
        };
        let report = solve_cop(&ex(), &OracleConfig::exact(5), &config).unwrap();
        eprintln!("{:?} {} {} {}", report.status, report.lower_bound, report.upper_bound, report.iterations);
        assert!(report.lower_bound <= -1.0 / 3.0 + 1e-9);
        assert!(report.upper_bound >= -1.0 / 3.0 - 1e-9);
        assert_eq!(report.certificate_violations, 0);
        let csv = report.history_csv();
        assert!(csv.starts_with("iteration,x0,x1,x2,verdict,"));
        assert_eq!(csv.lines().count(), report.history.len() + 1);
    }

    #[test]
    fn config_validation() {
        let bad = SolveConfig {
            target_radius: 20.0,
            initial_radius: 10.0,
            ..SolveConfig::default()
        };
        assert!(solve_cop(&ex(), &OracleConfig::exact(2), &bad).is_err());
    }
}

use serde::Serialize;

use crate::copositivity::Certificate;
use crate::error::{check_len, Error, Result};
use crate::matrix::SymMatrix;
use crate::model::{assemble_m, block_forms, dual_objective_gradient, DualPoint, Mbqp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CutKind {
    Deep,
    Neutral,
    Shallow,
    Objective,
}

/// Halfspace `aᵀd <= rhs` in dual coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cut {
    pub a: Vec<f64>,
    pub rhs: f64,
    pub kind: CutKind,
}

impl Cut {
    /// `rhs - aᵀd`, which equals `zᵀM(d)z` for a certificate cut.
    pub fn slack(&self, d: &[f64]) -> f64 {
        self.rhs - self.a.iter().zip(d).map(|(a, d)| a * d).sum::<f64>()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&v| v == 0.0)
    }
}

/// Sign of the certificate value at the test point decides the cut's depth.
pub fn classify_cut(value: f64, tol: f64) -> CutKind {
    if value < -tol {
        CutKind::Deep
    } else if value > tol {
        CutKind::Shallow
    } else {
        CutKind::Neutral
    }
}

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Expands `zᵀM(μ_lin, μ_quad, λ, γ)z` into `rhs - aᵀ(μ_lin, μ_quad, λ, γ)`.
///
/// Every dual point with a copositive `M` satisfies `aᵀd <= rhs`, while the
/// queried point violates it by `-certificate.value`.
pub fn certificate_to_cut(cert: &Certificate, problem: &Mbqp) -> Result<Cut> {
    check_len("certificate", problem.n + 1, cert.z.len())?;
    if let Some(i) = cert.z.iter().position(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "certificate entry {i} is {}, expected a nonnegative value",
            cert.z[i]
        )));
    }
    let (rhs, a) = block_forms(problem, &cert.z);
    Ok(Cut {
        a,
        rhs,
        kind: classify_cut(cert.value, DEFAULT_CLASSIFY_TOL),
    })
}

/// Which side of a 1-D test point the optimum lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Above,
    Below,
}

pub fn bisection_update(interval: (f64, f64), side: Side, test: f64) -> Result<(f64, f64)> {
    let (lo, hi) = interval;
    if !(lo <= test && test <= hi) {
        return Err(Error::InvalidArgument(format!(
            "test point {test} lies outside [{lo}, {hi}]"
        )));
    }
    Ok(match side {
        Side::Above => (test, hi),
        Side::Below => (lo, test),
    })
}

/// A copositive program `maximize gᵀd + const  s.t.  M(d) ∈ COP` whose
/// certificates can be turned into linear cuts.
pub trait SeparableProgram {
    fn dim(&self) -> usize;

    fn matrix_at(&self, point: &[f64]) -> Result<SymMatrix>;

    fn cut_from_certificate(&self, cert: &Certificate) -> Result<Cut>;

    fn objective_gradient(&self) -> Vec<f64>;

    fn objective_constant(&self) -> f64 {
        0.0
    }

    fn objective(&self, point: &[f64]) -> f64 {
        self.objective_gradient()
            .iter()
            .zip(point)
            .map(|(g, d)| g * d)
            .sum::<f64>()
            + self.objective_constant()
    }
}

/// The copositive dual of an [`Mbqp`] in `(μ_lin, μ_quad, λ, γ)` coordinates.
pub struct MbqpDual<'a> {
    problem: &'a Mbqp,
    gradient: Vec<f64>,
}

impl<'a> MbqpDual<'a> {
    pub fn new(problem: &'a Mbqp) -> Self {
        Self {
            problem,
            gradient: dual_objective_gradient(problem),
        }
    }

    pub fn problem(&self) -> &Mbqp {
        self.problem
    }
}

impl SeparableProgram for MbqpDual<'_> {
    fn dim(&self) -> usize {
        self.problem.dual_dim()
    }

    fn matrix_at(&self, point: &[f64]) -> Result<SymMatrix> {
        assemble_m(self.problem, &DualPoint::from_slice(self.problem, point)?)
    }

    fn cut_from_certificate(&self, cert: &Certificate) -> Result<Cut> {
        certificate_to_cut(cert, self.problem)
    }

    fn objective_gradient(&self) -> Vec<f64> {
        self.gradient.clone()
    }
}

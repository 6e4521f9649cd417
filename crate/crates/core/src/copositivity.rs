//! Discretized copositivity checks.
//!
//! Copositivity of `M` is tested by minimizing `zᵀMz` over the grid
//! `{0, 1/K, ..., 1}^{n+1}` with `K = 2^k - 1`. Each coordinate is written as
//! a `k`-bit binary expansion, which turns the grid search into a QUBO with
//! coefficients `DᵀMD` that any [`IsingSolver`] can attack.
//!
//! The check is one-sided. A certificate is a proof of non-copositivity; a
//! copositive verdict only says that no negative grid point was found.

use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::matrix::SymMatrix;
use crate::qubo::{IsingSolver, Qubo, SampleSet};

/// Bits per coordinate used for general MBQP duals unless overridden.
pub const DEFAULT_BITS_MBQP: u32 = 4;
/// Bits per coordinate for max-clique checks (plain binary grid).
pub const DEFAULT_BITS_CLIQUE: u32 = 1;

/// Binary-expansion matrix `D` of shape `(n+1) × k(n+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Discretization {
    bits: u32,
    side: usize,
}

impl Discretization {
    pub fn new(side: usize, bits: u32) -> Result<Self> {
        if side == 0 || bits == 0 {
            return Err(Error::InvalidArgument(
                "discretization needs a positive side length and bit count".into(),
            ));
        }
        if bits > 30 {
            return Err(Error::InvalidArgument(format!("{bits} bits per coordinate is too many")));
        }
        Ok(Self { bits, side })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Grid resolution `K = 2^k - 1`.
    pub fn resolution(&self) -> u64 {
        (1u64 << self.bits) - 1
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn columns(&self) -> usize {
        self.side * self.bits as usize
    }

    /// Entry `D[row][col]`.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let k = self.bits as usize;
        if col / k == row {
            (1u64 << (col % k)) as f64 / self.resolution() as f64
        } else {
            0.0
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.side)
            .map(|r| (0..self.columns()).map(|c| self.entry(r, c)).collect())
            .collect()
    }

    /// `z = D ẑ`; entries land on `{0, 1/K, ..., 1}`.
    pub fn expand(&self, bits: &[u8]) -> Result<Vec<f64>> {
        check_len("binary expansion", self.columns(), bits.len())?;
        let k = self.bits as usize;
        let res = self.resolution() as f64;
        Ok(bits
            .chunks(k)
            .map(|chunk| {
                let level: u64 = chunk
                    .iter()
                    .enumerate()
                    .map(|(p, &b)| u64::from(b != 0) << p)
                    .sum();
                level as f64 / res
            })
            .collect())
    }
}

pub fn build_discretization(side: usize, bits: u32) -> Result<Discretization> {
    Discretization::new(side, bits)
}

/// The QUBO `DᵀMD` whose energy at `ẑ` is `(Dẑ)ᵀ M (Dẑ)`.
pub fn cop_qubo(m: &SymMatrix, d: &Discretization) -> Result<Qubo> {
    check_len("matrix side", d.side(), m.size())?;
    let k = d.bits as usize;
    let cols = d.columns();
    let weights: Vec<f64> = (0..k)
        .map(|p| (1u64 << p) as f64 / d.resolution() as f64)
        .collect();
    let mut data = vec![0.0; cols * cols];
    for a in 0..cols {
        let (ra, wa) = (a / k, weights[a % k]);
        for b in 0..cols {
            let (rb, wb) = (b / k, weights[b % k]);
            data[a * cols + b] = wa * m.get(ra, rb) * wb;
        }
    }
    Qubo::new(SymMatrix::from_row_major(cols, data)?, 0.0)
}

/// A grid point with a negative quadratic form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub z: Vec<f64>,
    /// `zᵀMz`, recomputed directly from `M`.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CopositivityVerdict {
    /// No negative grid point was found. The value is the smallest `zᵀMz`
    /// seen (0 when only the origin attains it).
    Copositive {
        certified_minimum_over_grid: f64,
        /// A nonzero grid point with `zᵀMz == 0`, if the solver returned one.
        boundary: Option<Vec<f64>>,
    },
    Certificate(Certificate),
}

impl CopositivityVerdict {
    pub fn is_copositive(&self) -> bool {
        matches!(self, CopositivityVerdict::Copositive { .. })
    }

    pub fn value(&self) -> f64 {
        match self {
            CopositivityVerdict::Copositive {
                certified_minimum_over_grid,
                ..
            } => *certified_minimum_over_grid,
            CopositivityVerdict::Certificate(c) => c.value,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CopositivityVerdict::Certificate(c) => Some(c),
            CopositivityVerdict::Copositive { .. } => None,
        }
    }
}

/// Everything one oracle call produced.
#[derive(Clone, Debug)]
pub struct CopositivityCheck {
    pub verdict: CopositivityVerdict,
    /// Every distinct negative grid point among the samples, deepest first.
    /// The first entry equals the verdict's certificate.
    pub certificates: Vec<Certificate>,
    pub samples: SampleSet,
    pub qubo: Qubo,
}

/// Minimizes `DᵀMD` with `solver` and interprets the result.
///
/// Every certificate is re-evaluated against `M` itself and kept only if the
/// recomputed value is negative.
pub fn check_copositivity(
    m: &SymMatrix,
    d: &Discretization,
    solver: &dyn IsingSolver,
) -> Result<CopositivityCheck> {
    let qubo = cop_qubo(m, d)?;
    let samples = solver.solve(&qubo)?;
    if samples.is_empty() {
        return Err(Error::Solver(format!("{} returned no samples", solver.name())));
    }

    let mut certificates: Vec<Certificate> = Vec::new();
    let mut best_nonneg = f64::INFINITY;
    let mut boundary = None;
    let mut seen = std::collections::HashSet::new();
    for s in &samples.samples {
        if !seen.insert(s.assignment.clone()) {
            continue;
        }
        let z = d.expand(&s.assignment)?;
        let value = m.quad_form(&z);
        if value < 0.0 {
            certificates.push(Certificate { z, value });
        } else {
            if value == 0.0 && boundary.is_none() && z.iter().any(|&v| v > 0.0) {
                boundary = Some(z);
            }
            best_nonneg = best_nonneg.min(value);
        }
    }
    certificates.sort_by(|a, b| a.value.total_cmp(&b.value));

    let verdict = match certificates.first() {
        Some(c) => CopositivityVerdict::Certificate(c.clone()),
        None => CopositivityVerdict::Copositive {
            // the origin is always on the grid, so the grid minimum is at most 0
            certified_minimum_over_grid: best_nonneg.min(0.0),
            boundary,
        },
    };
    Ok(CopositivityCheck {
        verdict,
        certificates,
        samples,
        qubo,
    })
}

/// Smallest integer `K > 1 / (2(√(δ/‖M‖ + 1) - 1))`.
///
/// A grid of resolution `K` then contains a point with `zᵀMz < 0` whenever
/// some `z ∈ [0,1]^{n+1}` has `zᵀMz <= -δ`. `norm` must bound
/// `|uᵀMv| / (‖u‖∞‖v‖∞)`; [`SymMatrix::entrywise_l1`] does.
pub fn required_k(delta: f64, norm: f64) -> Result<u64> {
    if !(delta > 0.0 && norm > 0.0) {
        return Err(Error::InvalidArgument(
            "depth and norm must both be positive".into(),
        ));
    }
    let threshold = 1.0 / (2.0 * ((delta / norm + 1.0).sqrt() - 1.0));
    if !threshold.is_finite() || threshold >= u64::MAX as f64 {
        return Err(Error::InvalidArgument(format!(
            "depth {delta} is too small relative to norm {norm}"
        )));
    }
    Ok(threshold.floor() as u64 + 1)
}

/// Fewest bits whose resolution `2^k - 1` reaches `k_required`.
pub fn bits_for_resolution(k_required: u64) -> u32 {
    let mut bits = 1;
    while (1u64 << bits) - 1 < k_required {
        bits += 1;
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::ExactSolver;

    #[test]
    fn one_bit_is_identity() {
        let d = build_discretization(3, 1).unwrap();
        assert_eq!(
            d.to_rows(),
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0]
            ]
        );
    }

    #[test]
    fn two_bits_single_coordinate() {
        let d = build_discretization(1, 2).unwrap();
        assert_eq!(d.to_rows(), vec![vec![1.0 / 3.0, 2.0 / 3.0]]);
        assert_eq!(d.expand(&[1, 1]).unwrap(), vec![1.0]);
    }

    #[test]
    fn three_bits_two_coordinates() {
        let d = build_discretization(2, 3).unwrap();
        let r = d.to_rows();
        assert_eq!(r[0], vec![1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0, 0.0, 0.0, 0.0]);
        assert_eq!(r[1], vec![0.0, 0.0, 0.0, 1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0]);
        for col in 0..6 {
            assert_eq!((0..2).filter(|&row| d.entry(row, col) != 0.0).count(), 1);
        }
    }

    #[test]
    fn nonpositive_arguments_rejected() {
        assert!(build_discretization(0, 1).is_err());
        assert!(build_discretization(1, 0).is_err());
    }

    #[test]
    fn cop_qubo_examples() {
        let id = cop_qubo(&SymMatrix::identity(2), &build_discretization(2, 1).unwrap()).unwrap();
        assert_eq!(id.coeffs, SymMatrix::identity(2));

        let neg = SymMatrix::from_rows(&[vec![-1.0]]).unwrap();
        let q = cop_qubo(&neg, &build_discretization(1, 2).unwrap()).unwrap();
        let expect = [[-1.0 / 9.0, -2.0 / 9.0], [-2.0 / 9.0, -4.0 / 9.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((q.coeffs.get(i, j) - expect[i][j]).abs() < 1e-15);
            }
        }
        assert!(cop_qubo(&neg, &build_discretization(2, 2).unwrap()).is_err());
    }

    #[test]
    fn identity_is_copositive() {
        let d = build_discretization(3, 2).unwrap();
        let check = check_copositivity(&SymMatrix::identity(3), &d, &ExactSolver::default()).unwrap();
        assert_eq!(
            check.verdict,
            CopositivityVerdict::Copositive {
                certified_minimum_over_grid: 0.0,
                boundary: None
            }
        );
    }

    #[test]
    fn negative_identity_certificate() {
        let d = build_discretization(3, 1).unwrap();
        let m = SymMatrix::identity(3).scaled(-1.0);
        let check = check_copositivity(&m, &d, &ExactSolver::default()).unwrap();
        let cert = check.verdict.certificate().unwrap();
        assert_eq!(cert.z, vec![1.0, 1.0, 1.0]);
        assert_eq!(cert.value, -3.0);
    }

    #[test]
    fn k3_clique_certificate() {
        let mut m = SymMatrix::identity(3).scaled(2.0);
        m.add_scaled(&SymMatrix::filled(3, 1.0), -1.0);
        let d = build_discretization(3, 1).unwrap();
        let check = check_copositivity(&m, &d, &ExactSolver::default()).unwrap();
        let cert = check.verdict.certificate().unwrap();
        assert_eq!(cert.z, vec![1.0, 1.0, 1.0]);
        assert_eq!(cert.value, -3.0);
    }

    #[test]
    fn required_k_examples() {
        assert_eq!(required_k(1.0, 1.0).unwrap(), 2);
        assert_eq!(required_k(5.0, 5.0).unwrap(), 2);
        assert_eq!(required_k(1e6, 1.0).unwrap(), 1);
        assert!(required_k(1e-6, 1.0).unwrap() as f64 > 1e5 * 0.9);
        assert!(required_k(0.0, 1.0).is_err());
        assert!(required_k(1.0, -1.0).is_err());
    }

    #[test]
    fn bits_cover_resolution() {
        assert_eq!(bits_for_resolution(1), 1);
        assert_eq!(bits_for_resolution(2), 2);
        assert_eq!(bits_for_resolution(3), 2);
        assert_eq!(bits_for_resolution(4), 3);
        assert_eq!(bits_for_resolution(31), 5);
    }
}

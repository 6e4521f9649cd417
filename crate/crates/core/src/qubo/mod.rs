//! QUBO and Ising models, and the samplers that minimize them.
//!
//! Both models use the full bilinear form over a symmetric matrix: a QUBO's
//! energy is `xᵀQx + offset` and an Ising model's energy is
//! `zᵀJz + hᵀz + offset`. With that convention the stored `J_ij` is half of
//! the coupling attached to the unordered pair `{i, j}`; see
//! [`Ising::pair_coupling`].

mod anneal;
mod exact;
mod samples;

pub use anneal::{simulated_anneal, AnnealParams};
pub use exact::{brute_force_solve, ExactSolution, DEFAULT_EXACT_CAP};
pub use samples::{Sample, SampleSet};

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::matrix::SymMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Qubo {
    pub coeffs: SymMatrix,
    #[serde(default)]
    pub offset: f64,
}

impl Qubo {
    pub fn new(coeffs: SymMatrix, offset: f64) -> Result<Self> {
        if coeffs.size() == 0 {
            return Err(Error::InvalidArgument("a QUBO needs at least one variable".into()));
        }
        if !offset.is_finite() {
            return Err(Error::NonFinite("offset"));
        }
        Ok(Self { coeffs, offset })
    }

    pub fn n(&self) -> usize {
        self.coeffs.size()
    }

    /// `xᵀ·coeffs·x + offset` for a 0/1 assignment.
    pub fn energy(&self, x: &[u8]) -> Result<f64> {
        check_len("assignment", self.n(), x.len())?;
        Ok(self.energy_unchecked(x))
    }

    pub(crate) fn energy_unchecked(&self, x: &[u8]) -> f64 {
        let n = self.n();
        let mut total = self.offset;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let row = self.coeffs.row(i);
            total += row[i];
            for j in (i + 1)..n {
                if x[j] != 0 {
                    total += 2.0 * row[j];
                }
            }
        }
        total
    }

    /// Largest absolute coefficient, and smallest nonzero absolute coefficient.
    pub(crate) fn coefficient_range(&self) -> Option<(f64, f64)> {
        let mut max = 0.0f64;
        let mut min = f64::INFINITY;
        for &v in self.coeffs.as_slice() {
            let a = v.abs();
            if a > 0.0 {
                max = max.max(a);
                min = min.min(a);
            }
        }
        (max > 0.0).then_some((max, min))
    }

    pub fn to_ising(&self) -> Ising {
        qubo_to_ising(self)
    }
}

/// Free-function form of [`Qubo::energy`].
pub fn qubo_energy(q: &Qubo, x: &[u8]) -> Result<f64> {
    q.energy(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ising {
    /// Symmetric couplings with zero diagonal.
    pub j: SymMatrix,
    pub h: Vec<f64>,
    pub offset: f64,
}

impl Ising {
    pub fn n(&self) -> usize {
        self.h.len()
    }

    /// Coefficient of `z_i z_j` in the energy for `i != j`, i.e. `J_ij + J_ji`.
    pub fn pair_coupling(&self, i: usize, k: usize) -> f64 {
        if i == k {
            0.0
        } else {
            2.0 * self.j.get(i, k)
        }
    }

    pub fn energy(&self, z: &[i8]) -> Result<f64> {
        check_len("spins", self.n(), z.len())?;
        if let Some(bad) = z.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!(
                "spin {bad} is {}, expected -1 or +1",
                z[bad]
            )));
        }
        let zf: Vec<f64> = z.iter().map(|&s| f64::from(s)).collect();
        let field: f64 = self.h.iter().zip(&zf).map(|(h, z)| h * z).sum();
        Ok(self.j.quad_form(&zf) + field + self.offset)
    }
}

pub fn ising_energy(s: &Ising, z: &[i8]) -> Result<f64> {
    s.energy(z)
}

/// Change of variables `z = 2x - 1`.
///
/// `J = Q/4` off the diagonal, `h_i = ½ Σ_j Q_ij`, and the offset absorbs
/// `¼ Σ_ij Q_ij` plus the diagonal terms `¼ Q_ii z_i² = ¼ Q_ii`.
pub fn qubo_to_ising(q: &Qubo) -> Ising {
    let n = q.n();
    let mut j = SymMatrix::zeros(n);
    let mut h = vec![0.0; n];
    let mut offset = q.offset;
    for i in 0..n {
        let row = q.coeffs.row(i);
        h[i] = 0.5 * row.iter().sum::<f64>();
        offset += 0.25 * row.iter().sum::<f64>() + 0.25 * row[i];
        for k in (i + 1)..n {
            j.add_sym(i, k, 0.25 * row[k]);
        }
    }
    Ising { j, h, offset }
}

pub fn spins_from_bits(x: &[u8]) -> Vec<i8> {
    x.iter().map(|&b| if b == 0 { -1 } else { 1 }).collect()
}

pub fn bits_from_spins(z: &[i8]) -> Vec<u8> {
    z.iter().map(|&s| u8::from(s > 0)).collect()
}

/// Anything that can minimize a QUBO and report what it found.
pub trait IsingSolver {
    fn solve(&self, q: &Qubo) -> Result<SampleSet>;

    /// Short tag used in reports.
    fn name(&self) -> &'static str;
}

/// Exhaustive enumeration, returning every minimizer as a sample.
#[derive(Clone, Copy, Debug)]
pub struct ExactSolver {
    pub cap: usize,
}

impl Default for ExactSolver {
    fn default() -> Self {
        Self {
            cap: DEFAULT_EXACT_CAP,
        }
    }
}

impl IsingSolver for ExactSolver {
    fn solve(&self, q: &Qubo) -> Result<SampleSet> {
        let start = std::time::Instant::now();
        let sol = brute_force_solve(q, self.cap)?;
        let elapsed = start.elapsed().as_secs_f64();
        let samples = sol
            .argmin
            .into_iter()
            .map(|assignment| Sample {
                assignment,
                energy: sol.min_energy,
            })
            .collect();
        Ok(SampleSet {
            samples,
            anneal_time_per_read: elapsed,
            params: None,
        })
    }

    fn name(&self) -> &'static str {
        "exact"
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Annealer {
    pub params: AnnealParams,
}

impl IsingSolver for Annealer {
    fn solve(&self, q: &Qubo) -> Result<SampleSet> {
        simulated_anneal(q, &self.params)
    }

    fn name(&self) -> &'static str {
        "sa"
    }
}

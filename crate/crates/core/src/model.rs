//! Mixed-binary quadratic programs and their copositive duals.
//!
//! A problem is
//!
//! ```text
//! minimize    xᵀQx + 2cᵀx
//! subject to  Ax = b,  x >= 0,  x_j ∈ {0, 1} for j ∈ B
//! ```
//!
//! and its copositive dual maximizes `γ + Σ μ_lin_i b_i + μ_quad_i b_i²`
//! subject to `M(μ_lin, μ_quad, λ, γ)` being copositive, where `M` is the
//! objective block minus a linear combination of the lifted constraint blocks
//! (see [`assemble_m`]). All asymmetric blocks are stored symmetrized.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::matrix::SymMatrix;

pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct Mbqp {
    pub n: usize,
    pub m: usize,
    pub q: SymMatrix,
    pub c: Vec<f64>,
    /// `m` rows of length `n`.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    /// Sorted indices of binary variables.
    pub binary: Vec<usize>,
}

impl Mbqp {
    /// Builds and validates a problem; `n` and `m` are taken from `q` and `b`.
    pub fn new(
        q: SymMatrix,
        c: Vec<f64>,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        mut binary: Vec<usize>,
    ) -> Result<Self> {
        binary.sort_unstable();
        let problem = Self {
            n: q.size(),
            m: b.len(),
            q,
            c,
            a,
            b,
            binary,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        check_len("Q", n, self.q.size())?;
        check_len("c", n, self.c.len())?;
        check_len("A", self.m, self.a.len())?;
        for row in &self.a {
            check_len("A", n, row.len())?;
        }
        check_len("b", self.m, self.b.len())?;
        if self
            .c
            .iter()
            .chain(self.b.iter())
            .chain(self.a.iter().flatten())
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("c, A or b"));
        }
        for (k, &j) in self.binary.iter().enumerate() {
            if j >= n {
                return Err(Error::IndexOutOfRange {
                    field: "binary",
                    index: j,
                    size: n,
                });
            }
            if k > 0 && self.binary[k - 1] >= j {
                return Err(Error::InvalidArgument(
                    "binary index set must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }

    /// Number of dual variables, `2m + |B| + 1`.
    pub fn dual_dim(&self) -> usize {
        2 * self.m + self.binary.len() + 1
    }

    /// `(objective, feasible)` at the default tolerance.
    pub fn evaluate(&self, x: &[f64]) -> Result<(f64, bool)> {
        self.evaluate_with_tol(x, DEFAULT_FEASIBILITY_TOL)
    }

    pub fn evaluate_with_tol(&self, x: &[f64], tol: f64) -> Result<(f64, bool)> {
        check_len("x", self.n, x.len())?;
        let linear: f64 = self.c.iter().zip(x).map(|(c, x)| c * x).sum();
        let objective = self.q.quad_form(x) + 2.0 * linear;

        let rows_ok = self.a.iter().zip(&self.b).all(|(row, &bi)| {
            let ax: f64 = row.iter().zip(x).map(|(a, x)| a * x).sum();
            (ax - bi).abs() <= tol
        });
        let nonneg = x.iter().all(|&v| v >= -tol);
        let binary_ok = self
            .binary
            .iter()
            .all(|&j| x[j].abs() <= tol || (x[j] - 1.0).abs() <= tol);
        Ok((objective, rows_ok && nonneg && binary_ok))
    }

    /// `[[Q, c], [cᵀ, 0]]`.
    pub fn objective_block(&self) -> SymMatrix {
        let n = self.n;
        let mut out = SymMatrix::zeros(n + 1);
        for i in 0..n {
            for j in 0..n {
                out.add_sym(i, j, if i <= j { self.q.get(i, j) } else { 0.0 });
            }
            out.add_sym(i, n, self.c[i]);
        }
        out
    }

    fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        self.a[i].iter().zip(x).map(|(a, x)| a * x).sum()
    }
}

/// Variables of the copositive dual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPoint {
    pub mu_lin: Vec<f64>,
    pub mu_quad: Vec<f64>,
    pub lam: Vec<f64>,
    pub gamma: f64,
}

impl DualPoint {
    pub fn zeros(problem: &Mbqp) -> Self {
        Self {
            mu_lin: vec![0.0; problem.m],
            mu_quad: vec![0.0; problem.m],
            lam: vec![0.0; problem.binary.len()],
            gamma: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.mu_lin.len() + self.mu_quad.len() + self.lam.len() + 1
    }

    /// Flattens in the fixed coordinate order `(μ_lin, μ_quad, λ, γ)`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        v.extend_from_slice(&self.mu_lin);
        v.extend_from_slice(&self.mu_quad);
        v.extend_from_slice(&self.lam);
        v.push(self.gamma);
        v
    }

    pub fn from_slice(problem: &Mbqp, coords: &[f64]) -> Result<Self> {
        check_len("dual point", problem.dual_dim(), coords.len())?;
        let m = problem.m;
        let nb = problem.binary.len();
        Ok(Self {
            mu_lin: coords[..m].to_vec(),
            mu_quad: coords[m..2 * m].to_vec(),
            lam: coords[2 * m..2 * m + nb].to_vec(),
            gamma: coords[2 * m + nb],
        })
    }

    fn check(&self, problem: &Mbqp) -> Result<()> {
        check_len("mu_lin", problem.m, self.mu_lin.len())?;
        check_len("mu_quad", problem.m, self.mu_quad.len())?;
        check_len("lam", problem.binary.len(), self.lam.len())
    }
}

/// Variables of the homogenized dual, one multiplier per equality row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomDualPoint {
    pub mu: Vec<f64>,
    pub lam: Vec<f64>,
    pub gamma: f64,
}

impl HomDualPoint {
    fn check(&self, problem: &Mbqp) -> Result<()> {
        check_len("mu", problem.m, self.mu.len())?;
        check_len("lam", problem.binary.len(), self.lam.len())
    }
}

fn subtract_binary_blocks(out: &mut SymMatrix, problem: &Mbqp, lam: &[f64]) {
    let n = problem.n;
    for (&j, &l) in problem.binary.iter().zip(lam) {
        // block is [[-e_j e_jᵀ, ½e_j], [½e_jᵀ, 0]]
        out.add_sym(j, j, l);
        out.add_sym(j, n, -0.5 * l);
    }
}

/// The dual slack matrix `M(μ_lin, μ_quad, λ, γ)` of size `n + 1`.
pub fn assemble_m(problem: &Mbqp, d: &DualPoint) -> Result<SymMatrix> {
    d.check(problem)?;
    let n = problem.n;
    let mut out = problem.objective_block();
    for i in 0..problem.m {
        let row = &problem.a[i];
        let (lin, quad) = (d.mu_lin[i], d.mu_quad[i]);
        for j in 0..n {
            if row[j] == 0.0 {
                continue;
            }
            out.add_sym(j, n, -0.5 * lin * row[j]);
            for k in j..n {
                out.add_sym(j, k, -quad * row[j] * row[k]);
            }
        }
    }
    subtract_binary_blocks(&mut out, problem, &d.lam);
    out.add_sym(n, n, -d.gamma);
    Ok(out)
}

/// The homogenized dual slack matrix, where each equality row contributes
/// `[[A_iᵀA_i, -b_i A_iᵀ], [-b_i A_i, b_i²]]`.
pub fn assemble_m_hom(problem: &Mbqp, h: &HomDualPoint) -> Result<SymMatrix> {
    h.check(problem)?;
    let n = problem.n;
    let mut out = problem.objective_block();
    for i in 0..problem.m {
        let row = &problem.a[i];
        let (mu, bi) = (h.mu[i], problem.b[i]);
        for j in 0..n {
            if row[j] == 0.0 {
                continue;
            }
            out.add_sym(j, n, mu * bi * row[j]);
            for k in j..n {
                out.add_sym(j, k, -mu * row[j] * row[k]);
            }
        }
        out.add_sym(n, n, -mu * bi * bi);
    }
    subtract_binary_blocks(&mut out, problem, &h.lam);
    out.add_sym(n, n, -h.gamma);
    Ok(out)
}

/// `γ + Σ μ_lin_i b_i + μ_quad_i b_i²`.
pub fn dual_objective(problem: &Mbqp, d: &DualPoint) -> Result<f64> {
    d.check(problem)?;
    Ok(d.gamma
        + problem
            .b
            .iter()
            .zip(d.mu_lin.iter().zip(&d.mu_quad))
            .map(|(b, (lin, quad))| lin * b + quad * b * b)
            .sum::<f64>())
}

/// Gradient of [`dual_objective`] in `(μ_lin, μ_quad, λ, γ)` order.
pub fn dual_objective_gradient(problem: &Mbqp) -> Vec<f64> {
    let mut g = Vec::with_capacity(problem.dual_dim());
    g.extend_from_slice(&problem.b);
    g.extend(problem.b.iter().map(|b| b * b));
    g.extend(std::iter::repeat(0.0).take(problem.binary.len()));
    g.push(1.0);
    g
}

/// Maps a homogenized dual point to an ordinary one with the same slack
/// matrix and the same objective value `h.gamma`.
pub fn lift_hom_to_inhom(problem: &Mbqp, h: &HomDualPoint) -> Result<DualPoint> {
    h.check(problem)?;
    let shift: f64 = problem.b.iter().zip(&h.mu).map(|(b, mu)| b * b * mu).sum();
    Ok(DualPoint {
        mu_lin: problem.b.iter().zip(&h.mu).map(|(b, mu)| -2.0 * b * mu).collect(),
        mu_quad: h.mu.clone(),
        lam: h.lam.clone(),
        gamma: h.gamma + shift,
    })
}

/// Linear-form coefficients `zᵀ B_k z` of every constraint block, plus the
/// objective block value. `z = (x, t)` has length `n + 1`.
///
/// Returned as `(rhs, coeffs)` with `zᵀ M(d) z = rhs - coeffs·d`.
pub(crate) fn block_forms(problem: &Mbqp, z: &[f64]) -> (f64, Vec<f64>) {
    let n = problem.n;
    let (x, t) = (&z[..n], z[n]);
    let cx: f64 = problem.c.iter().zip(x).map(|(c, x)| c * x).sum();
    let rhs = problem.q.quad_form(x) + 2.0 * t * cx;

    let mut coeffs = Vec::with_capacity(problem.dual_dim());
    let row_vals: Vec<f64> = (0..problem.m).map(|i| problem.row_dot(i, x)).collect();
    coeffs.extend(row_vals.iter().map(|ax| t * ax));
    coeffs.extend(row_vals.iter().map(|ax| ax * ax));
    coeffs.extend(problem.binary.iter().map(|&j| -x[j] * x[j] + x[j] * t));
    coeffs.push(t * t);
    (rhs, coeffs)
}

#[derive(Deserialize, Serialize)]
struct MbqpFile {
    n: usize,
    m: usize,
    #[serde(rename = "Q")]
    q: Vec<Vec<f64>>,
    c: Vec<f64>,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    #[serde(default)]
    binary: Vec<usize>,
}

impl Mbqp {
    /// Parses the JSON problem format and validates it.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MbqpFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_len("Q", file.n, file.q.len())?;
        let problem = Self {
            n: file.n,
            m: file.m,
            q: SymMatrix::from_rows(&file.q)?,
            c: file.c,
            a: file.a,
            b: file.b,
            binary: file.binary,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MbqpFile {
            n: self.n,
            m: self.m,
            q: self.q.to_rows(),
            c: self.c.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
            binary: self.binary.clone(),
        })
        .expect("problem serializes")
    }
}

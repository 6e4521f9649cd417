use serde::Serialize;

use crate::copositivity::{Certificate, DEFAULT_BITS_CLIQUE};
use crate::cutting_plane::{
    classify_cut, run_cutting_plane, Cut, OracleConfig, Region, SeparableProgram, SolveConfig,
    SolveReport, SolveStatus, DEFAULT_CLASSIFY_TOL,
};
use crate::error::{check_len, Error, Result};
use crate::matrix::SymMatrix;

use super::Graph;

/// Slack subtracted before rounding the raw bound up.
pub const CLIQUE_ROUND_TOL: f64 = 1e-9;
pub const BRUTE_FORCE_CLIQUE_CAP: usize = 30;

/// `λ(I + Ā) - 𝟙𝟙ᵀ`, where `Ā` is the complement adjacency with zero diagonal.
pub fn clique_cop_matrix(g: &Graph, lambda: f64) -> SymMatrix {
    let n = g.n();
    let mut m = SymMatrix::filled(n, -1.0);
    for i in 0..n {
        m.add_sym(i, i, lambda);
    }
    for (i, j) in g.complement_edges() {
        m.add_sym(i, j, lambda);
    }
    m
}

/// `zᵀ(I + Ā)z`.
fn complement_form(g: &Graph, z: &[f64]) -> f64 {
    let diag: f64 = z.iter().map(|v| v * v).sum();
    let off: f64 = g.complement_edges().iter().map(|&(i, j)| z[i] * z[j]).sum();
    diag + 2.0 * off
}

/// Upper end of the search interval, `(1 + √(1 + 8|E|)) / 2`. A clique of
/// size `k` needs `k(k-1)/2` edges.
pub fn clique_upper_bound(g: &Graph) -> f64 {
    0.5 * (1.0 + (1.0 + 8.0 * g.edge_count() as f64).sqrt())
}

/// `maximize -λ  s.t.  λ(I + Ā) - 𝟙𝟙ᵀ copositive`, whose optimum is `-ω`.
pub struct CliqueDual<'a> {
    graph: &'a Graph,
}

impl<'a> CliqueDual<'a> {
    pub fn new(graph: &'a Graph) -> Self {
        Self { graph }
    }
}

impl SeparableProgram for CliqueDual<'_> {
    fn dim(&self) -> usize {
        1
    }

    fn matrix_at(&self, point: &[f64]) -> Result<SymMatrix> {
        check_len("lambda", 1, point.len())?;
        Ok(clique_cop_matrix(self.graph, point[0]))
    }

    fn cut_from_certificate(&self, cert: &Certificate) -> Result<Cut> {
        check_len("certificate", self.graph.n(), cert.z.len())?;
        if cert.z.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidArgument("certificate has a negative entry".into()));
        }
        // zᵀM(λ)z = λ·zᵀ(I+Ā)z - (𝟙ᵀz)² >= 0 on the feasible side
        let s: f64 = cert.z.iter().sum();
        Ok(Cut {
            a: vec![-complement_form(self.graph, &cert.z)],
            rhs: -s * s,
            kind: classify_cut(cert.value, DEFAULT_CLASSIFY_TOL),
        })
    }

    fn objective_gradient(&self) -> Vec<f64> {
        vec![-1.0]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliqueSolveOutcome {
    pub clique_number_estimate: usize,
    /// Largest `λ` shown infeasible, a lower bound on `ω`.
    pub lower_bound_raw: f64,
    /// Whether the oracle was exact, making the estimate exact too.
    pub certified: bool,
    pub report: SolveReport,
}

/// The binary-grid oracle used by default for clique problems.
pub fn default_clique_oracle() -> OracleConfig {
    OracleConfig::exact(DEFAULT_BITS_CLIQUE)
}

/// Bisects on `λ` over `[1, (1 + √(1 + 8|E|)) / 2]` and rounds the final
/// lower bound up.
///
/// `config.initial_radius` is ignored; the interval comes from the edge count.
pub fn solve_max_clique(
    g: &Graph,
    oracle: &OracleConfig,
    config: &SolveConfig,
) -> Result<CliqueSolveOutcome> {
    let program = CliqueDual::new(g);
    let hi = clique_upper_bound(g);
    let report = run_cutting_plane(&program, Region::Interval { lo: 1.0, hi }, oracle, config)?;
    if let SolveStatus::OracleFailure(msg) = &report.status {
        return Err(Error::Solver(msg.clone()));
    }
    let lower = report.interval.map_or(1.0, |(lo, _)| lo);
    let estimate = (lower - CLIQUE_ROUND_TOL).ceil().max(1.0) as usize;
    Ok(CliqueSolveOutcome {
        clique_number_estimate: estimate,
        lower_bound_raw: lower,
        certified: !oracle.solver.is_stochastic(),
        report,
    })
}

/// Exact clique number by branch and bound with a greedy-coloring bound.
pub fn brute_force_clique(g: &Graph) -> Result<usize> {
    Ok(max_clique_vertices(g)?.len())
}

/// One maximum clique, as sorted vertex indices.
pub fn max_clique_vertices(g: &Graph) -> Result<Vec<usize>> {
    let n = g.n();
    if n > BRUTE_FORCE_CLIQUE_CAP {
        return Err(Error::SizeCap {
            size: n,
            cap: BRUTE_FORCE_CLIQUE_CAP,
        });
    }
    let mut adj = vec![0u64; n];
    for (i, j) in g.edges() {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let mut search = Search {
        adj: &adj,
        best: 0,
        best_set: 0,
    };
    search.expand((1u64 << n) - 1, 0, 0);
    Ok((0..n).filter(|&v| search.best_set >> v & 1 == 1).collect())
}

struct Search<'a> {
    adj: &'a [u64],
    best: usize,
    best_set: u64,
}

impl Search<'_> {
    fn expand(&mut self, mut cand: u64, current: u64, size: usize) {
        let (order, colors) = self.color_sort(cand);
        for k in (0..order.len()).rev() {
            if size + colors[k] <= self.best {
                return;
            }
            let v = order[k];
            let next = cand & self.adj[v];
            let with_v = current | 1 << v;
            if next == 0 {
                if size + 1 > self.best {
                    self.best = size + 1;
                    self.best_set = with_v;
                }
            } else {
                self.expand(next, with_v, size + 1);
            }
            cand &= !(1 << v);
        }
    }

    /// Vertices of `cand` in nondecreasing greedy color; `colors[k]` bounds
    /// the clique size within `order[..=k]`.
    fn color_sort(&self, cand: u64) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(cand.count_ones() as usize);
        let mut colors = Vec::with_capacity(order.capacity());
        let mut uncolored = cand;
        let mut color = 0;
        while uncolored != 0 {
            color += 1;
            let mut open = uncolored;
            while open != 0 {
                let v = open.trailing_zeros() as usize;
                open &= !(1 << v) & !self.adj[v];
                uncolored &= !(1 << v);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{erdos_renyi, figure_two_graph};

    fn exhaustive(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|&mask| {
                let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                g.is_clique(&vs)
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn cop_matrix_examples() {
        let k3 = Graph::complete(3).unwrap();
        let ones = [1.0; 3];
        assert_eq!(clique_cop_matrix(&k3, 2.0).quad_form(&ones), -3.0);
        assert_eq!(clique_cop_matrix(&k3, 3.0).quad_form(&ones), 0.0);
        let empty = Graph::empty(2).unwrap();
        assert_eq!(clique_cop_matrix(&empty, 1.0), SymMatrix::zeros(2));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_clique(&figure_two_graph()).unwrap(), 4);
        assert_eq!(brute_force_clique(&Graph::complete(7).unwrap()).unwrap(), 7);
        assert_eq!(brute_force_clique(&Graph::empty(5).unwrap()).unwrap(), 1);
        assert!(brute_force_clique(&Graph::empty(31).unwrap()).is_err());
        for seed in 0..6 {
            let g = erdos_renyi(15, 0.5, seed).unwrap();
            assert_eq!(brute_force_clique(&g).unwrap(), exhaustive(&g), "seed {seed}");
            let vs = max_clique_vertices(&g).unwrap();
            assert!(g.is_clique(&vs));
        }
    }

    #[test]
    fn solve_examples() {
        let config = SolveConfig::default();
        let oracle = default_clique_oracle();
        let fig = solve_max_clique(&figure_two_graph(), &oracle, &config).unwrap();
        assert_eq!(fig.clique_number_estimate, 4);
        assert!(fig.certified);
        for n in 2..=8 {
            let out = solve_max_clique(&Graph::complete(n).unwrap(), &oracle, &config).unwrap();
            assert_eq!(out.clique_number_estimate, n);
            assert!(out.lower_bound_raw <= n as f64);
        }
        let out = solve_max_clique(&Graph::empty(4).unwrap(), &oracle, &config).unwrap();
        assert_eq!(out.clique_number_estimate, 1);
    }

    #[test]
    fn k3_lower_bound_converges() {
        let out = solve_max_clique(
            &Graph::complete(3).unwrap(),
            &default_clique_oracle(),
            &SolveConfig::default(),
        )
        .unwrap();
        assert_eq!(out.report.status, SolveStatus::Converged);
        assert!(out.lower_bound_raw > 3.0 - 1e-5 && out.lower_bound_raw <= 3.0);
    }
}

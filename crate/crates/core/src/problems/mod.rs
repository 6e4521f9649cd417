//! Problem generators and formulations around maximum clique.

mod clique;
mod graph;
mod penalty;

use std::fmt::Write as _;

pub use clique::{
    brute_force_clique, clique_cop_matrix, clique_upper_bound, default_clique_oracle,
    max_clique_vertices, solve_max_clique, CliqueDual, CliqueSolveOutcome,
    BRUTE_FORCE_CLIQUE_CAP, CLIQUE_ROUND_TOL,
};
pub use graph::{erdos_renyi, Graph};
pub use penalty::{clique_sample_metrics, penalty_clique_qubo, CliqueSampleMetrics};

use crate::matrix::SymMatrix;
use crate::model::Mbqp;

/// Five vertices with every edge except `{3, 4}`; `ω = 4`.
pub fn figure_two_graph() -> Graph {
    let edges = (0..5)
        .flat_map(|i| ((i + 1)..5).map(move |j| (i, j)))
        .filter(|&e| e != (3, 4));
    Graph::new(5, edges).expect("fixed graph is valid")
}

/// `min x₁² - 2x₁x₂  s.t.  x₁ + x₂ = 1, x >= 0`, optimum `-1/3` at `(1/3, 2/3)`.
pub fn ex_mbqp_fixture() -> Mbqp {
    Mbqp::new(
        SymMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 0.0]]).expect("fixed matrix"),
        vec![0.0, 0.0],
        vec![vec![1.0, 1.0]],
        vec![1.0],
        vec![],
    )
    .expect("fixed problem is valid")
}

/// Maximum clique as a stable-set MILP on the complement, in LP format.
/// Constraints are listed in lexicographic order of their vertex pair.
pub fn export_milp_text(g: &Graph) -> String {
    let vars: Vec<String> = (0..g.n()).map(|i| format!("x{i}")).collect();
    let mut out = String::from("\\ maximum clique\nMaximize\n obj: ");
    out.push_str(&vars.join(" + "));
    out.push_str("\nSubject To\n");
    for (k, (i, j)) in g.complement_edges().into_iter().enumerate() {
        let _ = writeln!(out, " c{k}: x{i} + x{j} <= 1");
    }
    out.push_str("Binary\n ");
    out.push_str(&vars.join(" "));
    out.push_str("\nEnd\n");
    out
}

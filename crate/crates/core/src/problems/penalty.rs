use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::qubo::{Qubo, SampleSet};

use super::Graph;

/// `-Σ x_i + weight · Σ_{(i,j) ∉ E} x_i x_j`, a maximum stable set QUBO on the
/// complement. Its ground-state energy is `-ω` whenever `weight > 1`.
pub fn penalty_clique_qubo(g: &Graph, weight: f64) -> Result<Qubo> {
    if !(weight > 0.0 && weight.is_finite()) {
        return Err(Error::InvalidArgument(format!("penalty weight {weight} must be positive")));
    }
    let mut coeffs = SymMatrix::zeros(g.n());
    for i in 0..g.n() {
        coeffs.add_sym(i, i, -1.0);
    }
    // the energy counts each off-diagonal entry twice
    for (i, j) in g.complement_edges() {
        coeffs.add_sym(i, j, 0.5 * weight);
    }
    Qubo::new(coeffs, 0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliqueSampleMetrics {
    /// Selected vertex count over the clique number, per sample.
    pub normalized_sizes: Vec<f64>,
    pub mean_normalized_size: f64,
    /// Fraction of samples whose selection is a clique (the empty set counts).
    pub valid_fraction: f64,
    /// Fraction of samples that are maximum cliques.
    pub ground_fraction: f64,
}

pub fn clique_sample_metrics(g: &Graph, samples: &SampleSet, truth: usize) -> Result<CliqueSampleMetrics> {
    if truth == 0 {
        return Err(Error::InvalidArgument("clique number must be at least 1".into()));
    }
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples to score".into()));
    }
    let mut sizes = Vec::with_capacity(samples.len());
    let mut valid = 0usize;
    let mut ground = 0usize;
    for s in &samples.samples {
        let chosen: Vec<usize> = (0..s.assignment.len()).filter(|&i| s.assignment[i] != 0).collect();
        let size = chosen.len() as f64 / truth as f64;
        sizes.push(size);
        if g.is_clique(&chosen) {
            valid += 1;
            if chosen.len() == truth {
                ground += 1;
            }
        }
    }
    let count = samples.len() as f64;
    Ok(CliqueSampleMetrics {
        mean_normalized_size: sizes.iter().sum::<f64>() / count,
        normalized_sizes: sizes,
        valid_fraction: valid as f64 / count,
        ground_fraction: ground as f64 / count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{brute_force_clique, figure_two_graph};
    use crate::qubo::{brute_force_solve, Sample};

    fn set(assignments: &[Vec<u8>]) -> SampleSet {
        SampleSet {
            samples: assignments
                .iter()
                .map(|a| Sample {
                    assignment: a.clone(),
                    energy: 0.0,
                })
                .collect(),
            anneal_time_per_read: 0.0,
            params: None,
        }
    }

    #[test]
    fn ground_states() {
        let k3 = Graph::complete(3).unwrap();
        let sol = brute_force_solve(&penalty_clique_qubo(&k3, 2.0).unwrap(), 24).unwrap();
        assert_eq!(sol.min_energy, -3.0);
        assert_eq!(sol.argmin, vec![vec![1, 1, 1]]);

        let fig = figure_two_graph();
        let sol = brute_force_solve(&penalty_clique_qubo(&fig, 2.0).unwrap(), 24).unwrap();
        assert_eq!(sol.min_energy, -4.0);
        for x in &sol.argmin {
            let vs: Vec<usize> = (0..5).filter(|&i| x[i] == 1).collect();
            assert_eq!(vs.len(), 4);
            assert!(fig.is_clique(&vs));
        }

        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let sol = brute_force_solve(&penalty_clique_qubo(&path, 2.0).unwrap(), 24).unwrap();
        assert_eq!(sol.min_energy, -2.0);
        assert_eq!(brute_force_clique(&path).unwrap(), 2);
        assert!(penalty_clique_qubo(&path, 0.0).is_err());
    }

    #[test]
    fn sample_metrics() {
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let m = clique_sample_metrics(&path, &set(&[vec![1, 1, 0]]), 2).unwrap();
        assert_eq!(m.normalized_sizes, vec![1.0]);
        assert_eq!((m.valid_fraction, m.ground_fraction), (1.0, 1.0));

        let m = clique_sample_metrics(&path, &set(&[vec![1, 1, 1]]), 2).unwrap();
        assert_eq!(m.normalized_sizes, vec![1.5]);
        assert_eq!((m.valid_fraction, m.ground_fraction), (0.0, 0.0));

        let m = clique_sample_metrics(&path, &set(&[vec![0, 0, 0], vec![0, 1, 1]]), 2).unwrap();
        assert_eq!(m.normalized_sizes, vec![0.0, 1.0]);
        assert_eq!(m.valid_fraction, 1.0);
        assert_eq!(m.ground_fraction, 0.5);
        assert_eq!(m.mean_normalized_size, 0.5);
        assert!(clique_sample_metrics(&path, &set(&[vec![0, 0, 0]]), 0).is_err());
    }
}

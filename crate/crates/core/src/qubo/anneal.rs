//! Single-spin-flip Metropolis annealing over Ising spins.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{bits_from_spins, qubo_to_ising, Qubo, Sample, SampleSet};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    pub sweeps: usize,
    pub reads: usize,
    /// Hot end of the schedule; defaults to `0.1 / max|coeff|`.
    pub beta_min: Option<f64>,
    /// Cold end of the schedule; defaults to `10 / min nonzero |coeff|`.
    pub beta_max: Option<f64>,
    pub seed: u64,
}

impl Default for AnnealParams {
    fn default() -> Self {
        Self {
            sweeps: 100,
            reads: 1000,
            beta_min: None,
            beta_max: None,
            seed: 0,
        }
    }
}

impl AnnealParams {
    pub fn new(sweeps: usize, reads: usize, seed: u64) -> Self {
        Self {
            sweeps,
            reads,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 || self.reads == 0 {
            return Err(Error::InvalidArgument("sweeps and reads must be positive".into()));
        }
        for b in [self.beta_min, self.beta_max].into_iter().flatten() {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::InvalidArgument(format!("inverse temperature {b} must be positive")));
            }
        }
        if let (Some(lo), Some(hi)) = (self.beta_min, self.beta_max) {
            if lo >= hi {
                return Err(Error::InvalidArgument(format!(
                    "beta_min ({lo}) must be below beta_max ({hi})"
                )));
            }
        }
        Ok(())
    }

    /// Resolves the schedule endpoints for a given problem.
    pub fn beta_range(&self, q: &Qubo) -> (f64, f64) {
        let (max, min) = q.coefficient_range().unwrap_or((1.0, 1.0));
        let lo = self.beta_min.unwrap_or(0.1 / max);
        let hi = self.beta_max.unwrap_or(10.0 / min);
        (lo, hi.max(lo))
    }

    pub fn schedule(&self, q: &Qubo) -> Vec<f64> {
        let (lo, hi) = self.beta_range(q);
        geometric_schedule(lo, hi, self.sweeps)
    }
}

fn geometric_schedule(lo: f64, hi: f64, sweeps: usize) -> Vec<f64> {
    if sweeps == 1 {
        return vec![hi];
    }
    let ratio = (hi / lo).ln() / (sweeps - 1) as f64;
    (0..sweeps).map(|s| lo * (ratio * s as f64).exp()).collect()
}

/// Runs `params.reads` independent anneals.
///
/// Read `r` draws from its own ChaCha stream `(seed, r)`, so the result does
/// not depend on the order in which reads are executed.
pub fn simulated_anneal(q: &Qubo, params: &AnnealParams) -> Result<SampleSet> {
    params.validate()?;
    let start = Instant::now();
    let ising = qubo_to_ising(q);
    let n = ising.n();
    let schedule = params.schedule(q);

    // dense couplings, doubled so that local_field = Σ_k 2J_ik z_k + h_i
    let coupling: Vec<f64> = ising.j.as_slice().iter().map(|v| 2.0 * v).collect();

    let mut samples = Vec::with_capacity(params.reads);
    let mut spins = vec![0i8; n];
    let mut field = vec![0.0; n];
    for read in 0..params.reads {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(read as u64);

        for s in spins.iter_mut() {
            *s = if rng.gen::<bool>() { 1 } else { -1 };
        }
        for i in 0..n {
            let row = &coupling[i * n..(i + 1) * n];
            field[i] = ising.h[i]
                + row
                    .iter()
                    .zip(&spins)
                    .map(|(c, &s)| c * f64::from(s))
                    .sum::<f64>();
        }

        for &beta in &schedule {
            for i in 0..n {
                let zi = f64::from(spins[i]);
                let delta = -2.0 * zi * field[i];
                let accept = delta <= 0.0 || rng.gen::<f64>() < (-beta * delta).exp();
                if accept {
                    spins[i] = -spins[i];
                    let row = &coupling[i * n..(i + 1) * n];
                    for (f, c) in field.iter_mut().zip(row) {
                        *f -= 2.0 * c * zi;
                    }
                }
            }
        }

        let assignment = bits_from_spins(&spins);
        let energy = q.energy_unchecked(&assignment);
        samples.push(Sample { assignment, energy });
    }

    Ok(SampleSet {
        samples,
        anneal_time_per_read: start.elapsed().as_secs_f64() / params.reads as f64,
        params: Some(*params),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SymMatrix;
    use crate::qubo::brute_force_solve;

    fn random_qubo(n: usize, seed: u64) -> Qubo {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Qubo::new(SymMatrix::from_row_major(n, data).unwrap(), 0.0).unwrap()
    }

    #[test]
    fn zero_qubo_samples_sit_at_offset() {
        let q = Qubo::new(SymMatrix::zeros(4), 0.75).unwrap();
        let set = simulated_anneal(&q, &AnnealParams::new(10, 20, 3)).unwrap();
        assert_eq!(set.len(), 20);
        assert!(set.samples.iter().all(|s| s.energy == 0.75));
    }

    #[test]
    fn single_variable_is_solved() {
        let q = Qubo::new(SymMatrix::from_rows(&[vec![-1.0]]).unwrap(), 0.0).unwrap();
        let set = simulated_anneal(&q, &AnnealParams::new(100, 50, 9)).unwrap();
        assert_eq!(set.best().unwrap().energy, -1.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let q = random_qubo(7, 1);
        let p = AnnealParams::new(20, 30, 77);
        let a = simulated_anneal(&q, &p).unwrap();
        let b = simulated_anneal(&q, &p).unwrap();
        assert_eq!(a.samples, b.samples);
        // at near-infinite temperature the reads are just the random starts
        let hot = AnnealParams {
            sweeps: 2,
            beta_min: Some(1e-6),
            beta_max: Some(2e-6),
            ..p
        };
        let c = simulated_anneal(&q, &hot).unwrap();
        let d = simulated_anneal(&q, &AnnealParams { seed: 78, ..hot }).unwrap();
        assert_ne!(c.samples, d.samples);
    }

    #[test]
    fn energies_are_recomputable_and_bounded_below() {
        for seed in 0..5 {
            let q = random_qubo(8, seed);
            let set = simulated_anneal(&q, &AnnealParams::new(50, 40, seed)).unwrap();
            let exact = brute_force_solve(&q, 24).unwrap();
            assert_eq!(set.max_energy_error(&q), 0.0);
            assert!(set.samples.iter().all(|s| s.energy >= exact.min_energy - 1e-12));
        }
    }

    #[test]
    fn finds_ground_state_on_small_instances() {
        for seed in 0..10 {
            let q = random_qubo(8, 100 + seed);
            let exact = brute_force_solve(&q, 24).unwrap();
            let found = [seed, seed + 1000].iter().any(|&s| {
                let set = simulated_anneal(&q, &AnnealParams::new(1000, 100, s)).unwrap();
                set.best().unwrap().energy <= exact.min_energy + 1e-12
            });
            assert!(found, "instance {seed} missed its ground state");
        }
    }

    #[test]
    fn params_validation() {
        assert!(AnnealParams::new(0, 1, 0).validate().is_err());
        assert!(AnnealParams::new(1, 0, 0).validate().is_err());
        let p = AnnealParams {
            beta_min: Some(2.0),
            beta_max: Some(1.0),
            ..AnnealParams::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn schedule_is_geometric() {
        let s = geometric_schedule(0.1, 10.0, 3);
        assert!((s[0] - 0.1).abs() < 1e-15);
        assert!((s[1] - 1.0).abs() < 1e-12);
        assert!((s[2] - 10.0).abs() < 1e-12);
        assert_eq!(geometric_schedule(0.1, 10.0, 1), vec![10.0]);
    }
}

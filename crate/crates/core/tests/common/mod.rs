#![allow(dead_code)]

use copocut::model::{HomDualPoint, Mbqp};
use copocut::qubo::Qubo;
use copocut::SymMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_sym(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> SymMatrix {
    let data = (0..n * n).map(|_| rng.gen_range(-scale..scale)).collect();
    SymMatrix::from_row_major(n, data).unwrap()
}

pub fn random_qubo(rng: &mut ChaCha8Rng, n: usize) -> Qubo {
    let offset = rng.gen_range(-2.0..2.0);
    Qubo::new(random_sym(rng, n, 3.0), offset).unwrap()
}

/// Small problem with `n` in 1..=4, up to 3 rows and a random binary subset.
pub fn random_problem(rng: &mut ChaCha8Rng) -> Mbqp {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(0..=3);
    let q = random_sym(rng, n, 2.0);
    let c = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let a = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    let b = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let binary = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    Mbqp::new(q, c, a, b, binary).unwrap()
}

pub fn random_hom_point(rng: &mut ChaCha8Rng, p: &Mbqp) -> HomDualPoint {
    HomDualPoint {
        mu: (0..p.m).map(|_| rng.gen_range(-3.0..3.0)).collect(),
        lam: (0..p.binary.len()).map(|_| rng.gen_range(-3.0..3.0)).collect(),
        gamma: rng.gen_range(-3.0..3.0),
    }
}

pub fn bits_of(mask: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| (mask >> i & 1) as u8).collect()
}

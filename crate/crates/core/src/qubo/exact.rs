use crate::error::{Error, Result};

use super::Qubo;

pub const DEFAULT_EXACT_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactSolution {
    pub min_energy: f64,
    /// Every assignment attaining `min_energy`, in increasing binary order
    /// (bit `i` of the index is variable `i`).
    pub argmin: Vec<Vec<u8>>,
}

/// Enumerates all `2^n` assignments in Gray-code order.
///
/// Energies are tracked incrementally; the final minimum and the tie set are
/// recomputed from scratch so the reported values are exact.
pub fn brute_force_solve(q: &Qubo, cap: usize) -> Result<ExactSolution> {
    let n = q.n();
    if n > cap || n >= 63 {
        return Err(Error::SizeCap { size: n, cap });
    }
    let coeffs = &q.coeffs;
    let diag: Vec<f64> = (0..n).map(|i| coeffs.get(i, i)).collect();
    let scale = 1.0f64.max(coeffs.entrywise_l1() + q.offset.abs());
    let drift_tol = 1e-9 * scale;

    let mut field = vec![0.0; n];
    let mut bits = vec![false; n];
    let mut energy = q.offset;
    let mut mask: u64 = 0;

    let mut best = energy;
    let mut candidates: Vec<u64> = vec![0];

    let total: u64 = 1 << n;
    for step in 1..total {
        let i = step.trailing_zeros() as usize;
        let on = !bits[i];
        let sign = if on { 1.0 } else { -1.0 };
        let own = if bits[i] { diag[i] } else { 0.0 };
        energy += sign * (diag[i] + 2.0 * (field[i] - own));
        bits[i] = on;
        mask ^= 1 << i;
        for (f, &c) in field.iter_mut().zip(coeffs.row(i)) {
            *f += sign * c;
        }

        if energy < best - drift_tol {
            best = energy;
            candidates.clear();
            candidates.push(mask);
        } else if energy <= best + drift_tol {
            best = best.min(energy);
            candidates.push(mask);
        }
    }

    let exact: Vec<(u64, f64)> = candidates
        .into_iter()
        .map(|m| {
            let x = unpack(m, n);
            (m, q.energy_unchecked(&x))
        })
        .collect();
    let min_energy = exact.iter().map(|&(_, e)| e).fold(f64::INFINITY, f64::min);
    let tie = 1e-12 * min_energy.abs().max(1.0);
    let mut masks: Vec<u64> = exact
        .into_iter()
        .filter(|&(_, e)| e <= min_energy + tie)
        .map(|(m, _)| m)
        .collect();
    masks.sort_unstable();
    Ok(ExactSolution {
        min_energy,
        argmin: masks.into_iter().map(|m| unpack(m, n)).collect(),
    })
}

fn unpack(mask: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((mask >> i) & 1) as u8).collect()
}

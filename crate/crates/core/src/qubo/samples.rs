use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{AnnealParams, Qubo};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub assignment: Vec<u8>,
    pub energy: f64,
}

/// Output of one solver call.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub samples: Vec<Sample>,
    /// Total wall time divided by the number of reads, in seconds.
    pub anneal_time_per_read: f64,
    /// Present when the set came from the annealer.
    pub params: Option<AnnealParams>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn best(&self) -> Option<&Sample> {
        self.samples
            .iter()
            .min_by(|a, b| a.energy.total_cmp(&b.energy))
    }

    pub fn mean_energy(&self) -> f64 {
        if self.samples.is_empty() {
            return f64::NAN;
        }
        self.samples.iter().map(|s| s.energy).sum::<f64>() / self.samples.len() as f64
    }

    /// Largest discrepancy between a recorded energy and its recomputation.
    pub fn max_energy_error(&self, q: &Qubo) -> f64 {
        self.samples
            .iter()
            .map(|s| (q.energy_unchecked(&s.assignment) - s.energy).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with columns `read_index,energy,assignment,anneal_time_s`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("read_index,energy,assignment,anneal_time_s\n");
        for (i, s) in self.samples.iter().enumerate() {
            let bits: String = s
                .assignment
                .iter()
                .map(|&b| if b == 0 { '0' } else { '1' })
                .collect();
            let _ = writeln!(out, "{i},{},{bits},{}", s.energy, self.anneal_time_per_read);
        }
        out
    }
}

//! Annealer metrics and the max-clique benchmark driver.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cutting_plane::{OracleConfig, SolveConfig};
use crate::error::{Error, Result};
use crate::problems::{
    brute_force_clique, clique_sample_metrics, default_clique_oracle, erdos_renyi,
    penalty_clique_qubo, solve_max_clique, Graph,
};
use crate::qubo::{simulated_anneal, AnnealParams, Qubo, SampleSet};

/// Samples within this distance of the ground energy count as hits.
pub const GROUND_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TttInputs {
    /// Target confidence `s`, strictly between 0 and 1.
    pub confidence: f64,
    /// Per-read success probability `p`.
    pub p_success: f64,
    /// Seconds per read.
    pub anneal_time_per_read: f64,
}

/// `T · log(1 - s) / log(1 - p)`: expected time to succeed at least once with
/// confidence `s`. Infinite when `p = 0`, one read when `p >= 1`.
pub fn time_to_target(i: &TttInputs) -> Result<f64> {
    if !(i.confidence > 0.0 && i.confidence < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence {} must lie strictly between 0 and 1",
            i.confidence
        )));
    }
    if !(i.p_success >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "success probability {} must be nonnegative",
            i.p_success
        )));
    }
    if !(i.anneal_time_per_read >= 0.0 && i.anneal_time_per_read.is_finite()) {
        return Err(Error::InvalidArgument("anneal time must be finite and nonnegative".into()));
    }
    if i.p_success == 0.0 {
        return Ok(f64::INFINITY);
    }
    if i.p_success >= 1.0 {
        return Ok(i.anneal_time_per_read);
    }
    let ratio = (1.0 - i.confidence).ln() / (1.0 - i.p_success).ln();
    // one read is the least one can spend
    Ok(i.anneal_time_per_read * ratio.max(1.0))
}

/// Mean sample energy over the (negative) ground energy, clamped to `[0, 1]`.
pub fn p_hat_succ(samples: &SampleSet, ground: f64) -> Result<f64> {
    if !(ground < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "the energy ratio needs a negative ground state, got {ground}; use p_succ_exact"
        )));
    }
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    Ok((samples.mean_energy() / ground).clamp(0.0, 1.0))
}

/// Fraction of samples at the ground energy (within [`GROUND_TOL`]).
pub fn p_succ_exact(samples: &SampleSet, ground: f64) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let hits = samples
        .samples
        .iter()
        .filter(|s| (s.energy - ground).abs() <= GROUND_TOL)
        .count();
    hits as f64 / samples.len() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BenchMethod {
    #[serde(rename = "brute-force")]
    BruteForce,
    #[serde(rename = "copositive-exact")]
    CopositiveExact,
    #[serde(rename = "copositive-sa")]
    CopositiveSa,
    #[serde(rename = "penalty-sa")]
    PenaltySa,
}

impl BenchMethod {
    pub fn tag(self) -> &'static str {
        match self {
            BenchMethod::BruteForce => "brute-force",
            BenchMethod::CopositiveExact => "copositive-exact",
            BenchMethod::CopositiveSa => "copositive-sa",
            BenchMethod::PenaltySa => "penalty-sa",
        }
    }
}

impl std::str::FromStr for BenchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute-force" => Ok(BenchMethod::BruteForce),
            "copositive-exact" => Ok(BenchMethod::CopositiveExact),
            "copositive-sa" => Ok(BenchMethod::CopositiveSa),
            "penalty-sa" => Ok(BenchMethod::PenaltySa),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

fn default_sizes() -> Vec<usize> {
    vec![8, 10, 12, 14]
}

fn default_densities() -> Vec<f64> {
    vec![0.25, 0.5, 0.75]
}

fn default_seeds() -> usize {
    25
}

fn default_sweeps() -> usize {
    100
}

fn default_reads() -> usize {
    1000
}

fn default_weight() -> f64 {
    2.0
}

/// Benchmark suite, as read from JSON. Omitted fields take desk-scale defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_sizes", alias = "n")]
    pub sizes: Vec<usize>,
    #[serde(default = "default_densities")]
    pub densities: Vec<f64>,
    /// Instances per (size, density) pair.
    #[serde(default = "default_seeds")]
    pub seeds: usize,
    #[serde(default)]
    pub base_seed: u64,
    pub methods: Vec<BenchMethod>,
    #[serde(default = "default_sweeps")]
    pub sweeps: usize,
    #[serde(default = "default_reads")]
    pub reads: usize,
    #[serde(default = "default_weight")]
    pub penalty_weight: f64,
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument("the method list is empty".into()));
        }
        if self.sizes.is_empty() || self.densities.is_empty() || self.seeds == 0 {
            return Err(Error::InvalidArgument("sizes, densities and seeds must be nonempty".into()));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n == 0 || n > crate::problems::BRUTE_FORCE_CLIQUE_CAP) {
            return Err(Error::InvalidArgument(format!(
                "size {n} is outside 1..={}",
                crate::problems::BRUTE_FORCE_CLIQUE_CAP
            )));
        }
        if let Some(p) = self.densities.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidArgument(format!("density {p} is outside [0, 1]")));
        }
        AnnealParams::new(self.sweeps, self.reads, 0).validate()?;
        if !(self.penalty_weight > 0.0) {
            return Err(Error::InvalidArgument("penalty weight must be positive".into()));
        }
        Ok(())
    }
}

/// Seed for the graph generator, distinct per (size, density, seed).
pub fn instance_seed(n: usize, density: f64, seed: u64) -> u64 {
    let mut h = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    h ^= (n as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h ^= density.to_bits().rotate_left(17);
    h
}

pub fn instance_id(n: usize, density: f64, seed: u64) -> String {
    format!("er-n{n}-p{density}-s{seed}")
}

/// One (instance, method) result. Column order is the CSV schema.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance_id: String,
    pub n: usize,
    pub density: f64,
    pub seed: u64,
    pub method: BenchMethod,
    pub sweeps: Option<usize>,
    pub reads: Option<usize>,
    /// Clique size found.
    pub value: f64,
    pub truth: Option<f64>,
    pub correct: Option<bool>,
    pub oracle_time_s: f64,
    pub other_time_s: f64,
    pub ttt99_s: Option<f64>,
    pub ttt999_s: Option<f64>,
}

pub const BENCH_CSV_HEADER: &str = "instance_id,n,density,seed,method,sweeps,reads,value,truth,correct,oracle_time_s,other_time_s,ttt99_s,ttt999_s";

fn ttt_pair(p: f64, t: f64) -> Result<(f64, f64)> {
    let at = |s| {
        time_to_target(&TttInputs {
            confidence: s,
            p_success: p,
            anneal_time_per_read: t,
        })
    };
    Ok((at(0.99)?, at(0.999)?))
}

fn run_method(
    g: &Graph,
    method: BenchMethod,
    truth: usize,
    suite: &SuiteConfig,
    seed: u64,
) -> Result<(f64, f64, f64, Option<(f64, f64)>)> {
    let params = AnnealParams::new(suite.sweeps, suite.reads, seed);
    let start = Instant::now();
    match method {
        BenchMethod::BruteForce => {
            let w = brute_force_clique(g)?;
            Ok((w as f64, 0.0, start.elapsed().as_secs_f64(), None))
        }
        BenchMethod::CopositiveExact | BenchMethod::CopositiveSa => {
            let oracle = if method == BenchMethod::CopositiveExact {
                default_clique_oracle()
            } else {
                OracleConfig::anneal(crate::copositivity::DEFAULT_BITS_CLIQUE, params)
            };
            let out = solve_max_clique(g, &oracle, &SolveConfig::default())?;
            let wall = start.elapsed().as_secs_f64();
            let oracle_time = out.report.oracle_time.min(wall);
            Ok((out.clique_number_estimate as f64, oracle_time, wall - oracle_time, None))
        }
        BenchMethod::PenaltySa => {
            let q = penalty_clique_qubo(g, suite.penalty_weight)?;
            let oracle_start = Instant::now();
            let samples = simulated_anneal(&q, &params)?;
            let oracle_time = oracle_start.elapsed().as_secs_f64();
            let found = best_valid_clique(g, &samples);
            let p = p_hat_succ(&samples, -(truth as f64))?;
            let ttt = ttt_pair(p, samples.anneal_time_per_read)?;
            let wall = start.elapsed().as_secs_f64();
            Ok((found as f64, oracle_time, (wall - oracle_time).max(0.0), Some(ttt)))
        }
    }
}

/// Largest clique selected by any sample.
pub fn best_valid_clique(g: &Graph, samples: &SampleSet) -> usize {
    samples
        .samples
        .iter()
        .filter_map(|s| {
            let vs: Vec<usize> = (0..s.assignment.len()).filter(|&i| s.assignment[i] != 0).collect();
            g.is_clique(&vs).then_some(vs.len())
        })
        .max()
        .unwrap_or(0)
}

/// Runs every method on every instance, sorted by (n, density, seed, method).
pub fn run_benchmark(suite: &SuiteConfig) -> Result<Vec<BenchRecord>> {
    suite.validate()?;
    let mut methods = suite.methods.clone();
    methods.sort();
    methods.dedup();
    let mut sizes = suite.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut densities = suite.densities.clone();
    densities.sort_by(f64::total_cmp);
    densities.dedup();

    let mut records = Vec::new();
    for &n in &sizes {
        for &density in &densities {
            for k in 0..suite.seeds as u64 {
                let seed = suite.base_seed + k;
                let g = erdos_renyi(n, density, instance_seed(n, density, seed))?;
                let truth = brute_force_clique(&g)?;
                for &method in &methods {
                    let (value, oracle_time, other_time, ttt) =
                        run_method(&g, method, truth, suite, seed)?;
                    let annealed = matches!(method, BenchMethod::CopositiveSa | BenchMethod::PenaltySa);
                    records.push(BenchRecord {
                        instance_id: instance_id(n, density, seed),
                        n,
                        density,
                        seed,
                        method,
                        sweeps: annealed.then_some(suite.sweeps),
                        reads: annealed.then_some(suite.reads),
                        value,
                        truth: Some(truth as f64),
                        correct: Some(value == truth as f64),
                        oracle_time_s: oracle_time,
                        other_time_s: other_time,
                        ttt99_s: ttt.map(|t| t.0),
                        ttt999_s: ttt.map(|t| t.1),
                    });
                }
            }
        }
    }
    Ok(records)
}

pub fn records_to_csv(records: &[BenchRecord]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    if records.is_empty() {
        writer
            .write_record(BENCH_CSV_HEADER.split(','))
            .map_err(|e| Error::Parse(e.to_string()))?;
    }
    for r in records {
        writer.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes to a sibling temporary file and renames it into place.
pub fn write_atomic(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn write_records_csv(records: &[BenchRecord], path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path, &records_to_csv(records)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub sweeps: usize,
    pub p_success: f64,
    pub anneal_time_per_read: f64,
    pub ttt99_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Index of the fastest row; ties go to fewer sweeps.
    pub argmin: usize,
}

/// Time-to-solution at 99% for each sweep count, counting only ground-state
/// samples as successes.
pub fn sweep_grid(q: &Qubo, ground: f64, candidates: &[usize], reads: usize, seed: u64) -> Result<SweepTable> {
    if candidates.is_empty() {
        return Err(Error::InvalidArgument("no sweep candidates".into()));
    }
    let mut rows = Vec::with_capacity(candidates.len());
    for &sweeps in candidates {
        let samples = simulated_anneal(q, &AnnealParams::new(sweeps, reads, seed))?;
        let p = p_succ_exact(&samples, ground);
        let ttt = time_to_target(&TttInputs {
            confidence: 0.99,
            p_success: p,
            anneal_time_per_read: samples.anneal_time_per_read,
        })?;
        rows.push(SweepRow {
            sweeps,
            p_success: p,
            anneal_time_per_read: samples.anneal_time_per_read,
            ttt99_s: ttt,
        });
    }
    let argmin = (0..rows.len())
        .min_by(|&a, &b| {
            rows[a]
                .ttt99_s
                .total_cmp(&rows[b].ttt99_s)
                .then(rows[a].sweeps.cmp(&rows[b].sweeps))
        })
        .expect("rows are nonempty");
    Ok(SweepTable { rows, argmin })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightRow {
    pub weight: f64,
    pub mean_normalized_size: f64,
    pub valid_fraction: f64,
    pub ground_fraction: f64,
}

/// Anneals the penalty QUBO at each weight with the same parameters.
pub fn penalty_weight_sweep(g: &Graph, weights: &[f64], params: &AnnealParams) -> Result<Vec<WeightRow>> {
    let truth = brute_force_clique(g)?;
    weights
        .iter()
        .map(|&w| {
            let samples = simulated_anneal(&penalty_clique_qubo(g, w)?, params)?;
            let m = clique_sample_metrics(g, &samples, truth)?;
            Ok(WeightRow {
                weight: w,
                mean_normalized_size: m.mean_normalized_size,
                valid_fraction: m.valid_fraction,
                ground_fraction: m.ground_fraction,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::Sample;

    fn energies(values: &[f64]) -> SampleSet {
        SampleSet {
            samples: values
                .iter()
                .map(|&energy| Sample {
                    assignment: vec![0],
                    energy,
                })
                .collect(),
            anneal_time_per_read: 1.0,
            params: None,
        }
    }

    fn ttt(p: f64, s: f64) -> f64 {
        time_to_target(&TttInputs {
            confidence: s,
            p_success: p,
            anneal_time_per_read: 1.0,
        })
        .unwrap()
    }

    #[test]
    fn ttt_examples() {
        assert!((ttt(0.5, 0.99) - 6.6439).abs() < 1e-3);
        assert_eq!(ttt(0.99, 0.99), 1.0);
        assert_eq!(ttt(0.0, 0.5), f64::INFINITY);
        assert_eq!(ttt(1.0, 0.999), 1.0);
        assert!(time_to_target(&TttInputs {
            confidence: 1.0,
            p_success: 0.5,
            anneal_time_per_read: 1.0
        })
        .is_err());
    }

    #[test]
    fn success_probabilities() {
        assert_eq!(p_hat_succ(&energies(&[-4.0, -4.0]), -4.0).unwrap(), 1.0);
        assert_eq!(p_hat_succ(&energies(&[-1.0, -3.0]), -4.0).unwrap(), 0.5);
        assert_eq!(p_hat_succ(&energies(&[2.0, 1.0]), -4.0).unwrap(), 0.0);
        assert!(p_hat_succ(&energies(&[1.0]), 0.0).is_err());

        let mut values = vec![0.0; 1000];
        values[..137].iter_mut().for_each(|v| *v = -2.0);
        assert!((p_succ_exact(&energies(&values), -2.0) - 0.137).abs() < 1e-15);
        assert_eq!(p_succ_exact(&energies(&[0.0]), -2.0), 0.0);
        assert_eq!(p_succ_exact(&energies(&[-2.0, -2.0 + 1e-12]), -2.0), 1.0);
    }

    #[test]
    fn suite_parsing() {
        let s = SuiteConfig::from_json(
            r#"{"sizes": [8, 12], "densities": [0.5], "seeds": 5, "methods": ["brute-force", "copositive-exact"]}"#,
        )
        .unwrap();
        assert_eq!(s.sweeps, 100);
        assert_eq!(s.methods, vec![BenchMethod::BruteForce, BenchMethod::CopositiveExact]);
        let empty = SuiteConfig {
            methods: vec![],
            ..s.clone()
        };
        assert!(run_benchmark(&empty).is_err());
        assert!(SuiteConfig::from_json(r#"{"methods": ["qaoa"]}"#).is_err());
    }

    #[test]
    fn sweep_grid_tie_break() {
        // two separated minima are hard to miss, so use an unreachable ground
        let q = Qubo::new(crate::matrix::SymMatrix::identity(3), 0.0).unwrap();
        let t = sweep_grid(&q, -1.0, &[30, 10, 20], 5, 0).unwrap();
        assert!(t.rows.iter().all(|r| r.ttt99_s.is_infinite()));
        assert_eq!(t.rows[t.argmin].sweeps, 10);
        let single = sweep_grid(&q, 0.0, &[7], 5, 0).unwrap();
        assert_eq!(single.argmin, 0);
        assert!(sweep_grid(&q, 0.0, &[], 5, 0).is_err());
    }

    #[test]
    fn csv_header_is_stable() {
        let csv = records_to_csv(&[]).unwrap();
        assert_eq!(csv.trim_end(), BENCH_CSV_HEADER);
    }
}

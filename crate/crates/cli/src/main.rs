use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use copocut::bench::{penalty_weight_sweep, run_benchmark, write_atomic, write_records_csv, SuiteConfig};
use copocut::copositivity::{DEFAULT_BITS_CLIQUE, DEFAULT_BITS_MBQP};
use copocut::cutting_plane::{
    solve_cop, Escalation, OracleConfig, SolveConfig, SolveStatus, SolverChoice,
};
use copocut::model::Mbqp;
use copocut::problems::{export_milp_text, solve_max_clique, Graph};
use copocut::qubo::AnnealParams;
use copocut::{Error, SymMatrix};

const EXIT_INVALID: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(name = "copocut", version, about = "Copositive cutting-plane solver with QUBO oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound a mixed-binary QP through its copositive dual
    Solve {
        problem: PathBuf,
        /// Radius of the initial ball
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        /// Where to write the JSON report (history CSV goes alongside)
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Estimate the clique number of a graph (DIMACS or JSON)
    Maxclique {
        graph: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check one matrix for copositivity over the discretized box
    Checkcop {
        matrix: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Run a benchmark suite and write a CSV of records
    Bench {
        suite: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Anneal the penalty QUBO of a graph across penalty weights
    PenaltySweep {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4,8,16")]
        weights: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        sweeps: usize,
        #[arg(long, default_value_t = 1000)]
        reads: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the maximum clique MILP in LP format
    ExportMilp { graph: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverKind {
    Exact,
    Sa,
}

#[derive(Args)]
struct OracleArgs {
    /// Bits per coordinate (default 4 for MBQP, 1 for max-clique and checkcop)
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long, value_enum, default_value = "exact")]
    solver: SolverKind,
    #[arg(long, default_value_t = 100)]
    sweeps: usize,
    #[arg(long, default_value_t = 1000)]
    reads: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Re-check annealer "copositive" verdicts with more reads, then more bits
    #[arg(long)]
    escalate: bool,
}

impl OracleArgs {
    fn config(&self, default_bits: u32) -> OracleConfig {
        let bits = self.bits.unwrap_or(default_bits);
        let params = AnnealParams::new(self.sweeps, self.reads, self.seed);
        let solver = match self.solver {
            SolverKind::Exact => SolverChoice::exact(),
            SolverKind::Sa => SolverChoice::Anneal(params),
        };
        OracleConfig {
            bits,
            solver,
            escalation: self.escalate.then_some(Escalation {
                max_bits: bits + 2,
                max_reads: self.reads * 4,
            }),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    /// Stop once the bound interval is at most this wide
    #[arg(long)]
    target_width: Option<f64>,
    /// Add up to five certificates per oracle call
    #[arg(long)]
    multi_cut: bool,
}

impl RunArgs {
    fn config(&self, radius: f64) -> SolveConfig {
        SolveConfig {
            initial_radius: radius,
            max_iters: self.max_iters,
            multi_cut: self.multi_cut,
            gap_tol: self.target_width,
            ..SolveConfig::default()
        }
    }
}

enum Failure {
    Invalid(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Solver(_) | Error::SizeCap { .. } => Failure::Solver(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            problem,
            radius,
            report,
            oracle,
            run,
        } => {
            let p = Mbqp::from_json(&read(&problem)?)?;
            let out = solve_cop(&p, &oracle.config(DEFAULT_BITS_MBQP), &run.config(radius))?;
            let report_path = report.unwrap_or_else(|| problem.with_extension("report.json"));
            let history_path = report_path.with_extension("history.csv");
            let body = serde_json::to_string_pretty(&out).expect("report serializes");
            write_atomic(&report_path, &body)?;
            write_atomic(&history_path, &out.history_csv())?;
            println!("interval: [{}, {}]", out.lower_bound, out.upper_bound);
            println!("status: {}", status_tag(&out.status));
            println!("report: {}", report_path.display());
            println!("history: {}", history_path.display());
            if let SolveStatus::OracleFailure(msg) = out.status {
                return Err(Failure::Solver(msg));
            }
        }
        Command::Maxclique { graph, oracle, run } => {
            let g = Graph::load(&graph)?;
            let out = solve_max_clique(&g, &oracle.config(DEFAULT_BITS_CLIQUE), &run.config(1.0))?;
            println!("omega: {}", out.clique_number_estimate);
            println!("lower_bound: {}", out.lower_bound_raw);
            println!("certified: {}", out.certified);
        }
        Command::Checkcop { matrix, oracle } => {
            let m: SymMatrix =
                serde_json::from_str(&read(&matrix)?).map_err(|e| Failure::Invalid(e.to_string()))?;
            let (check, _) = oracle.config(DEFAULT_BITS_CLIQUE).check(&m)?;
            let verdict = &check.verdict;
            let out = json!({
                "copositive": verdict.is_copositive(),
                "value": verdict.value(),
                "certificate": verdict.certificate().map(|c| c.z.clone()),
            });
            println!("{out}");
        }
        Command::Bench { suite, out } => {
            let config = SuiteConfig::from_json(&read(&suite)?)?;
            let records = run_benchmark(&config)?;
            write_records_csv(&records, &out)?;
            let correct = records.iter().filter(|r| r.correct == Some(true)).count();
            println!("records: {} ({correct} correct)", records.len());
            println!("csv: {}", out.display());
        }
        Command::PenaltySweep {
            graph,
            weights,
            sweeps,
            reads,
            seed,
        } => {
            let g = Graph::load(&graph)?;
            let rows = penalty_weight_sweep(&g, &weights, &AnnealParams::new(sweeps, reads, seed))?;
            println!("weight,mean_normalized_size,valid_fraction,ground_fraction");
            for r in rows {
                println!(
                    "{},{},{},{}",
                    r.weight, r.mean_normalized_size, r.valid_fraction, r.ground_fraction
                );
            }
        }
        Command::ExportMilp { graph } => {
            print!("{}", export_milp_text(&Graph::load(&graph)?));
        }
    }
    Ok(())
}

fn status_tag(status: &SolveStatus) -> String {
    match status {
        SolveStatus::Converged => "converged".into(),
        SolveStatus::TargetVolume => "target_volume".into(),
        SolveStatus::IterationLimit => "iteration_limit".into(),
        SolveStatus::OracleFailure(m) => format!("oracle_failure ({m})"),
        SolveStatus::DualInfeasible => "dual_infeasible".into(),
        SolveStatus::Degenerate(m) => format!("degenerate ({m})"),
        SolveStatus::BoundsCrossed => "bounds_crossed".into(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            ExitCode::from(EXIT_SOLVER)
        }
    }
}

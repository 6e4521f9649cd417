use serde::{Deserialize, Serialize};

use crate::copositivity::{check_copositivity, CopositivityCheck, Discretization};
use crate::error::Result;
use crate::matrix::SymMatrix;
use crate::qubo::{AnnealParams, Annealer, ExactSolver, DEFAULT_EXACT_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SolverChoice {
    Exact { cap: usize },
    Anneal(AnnealParams),
}

impl SolverChoice {
    pub fn exact() -> Self {
        SolverChoice::Exact {
            cap: DEFAULT_EXACT_CAP,
        }
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(self, SolverChoice::Anneal(_))
    }

    fn solve_with(&self, m: &SymMatrix, d: &Discretization) -> Result<CopositivityCheck> {
        match *self {
            SolverChoice::Exact { cap } => check_copositivity(m, d, &ExactSolver { cap }),
            SolverChoice::Anneal(params) => check_copositivity(m, d, &Annealer { params }),
        }
    }
}

/// Re-check policy for copositive verdicts from a stochastic solver: double
/// the reads up to `max_reads`, then add bits up to `max_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Escalation {
    pub max_bits: u32,
    pub max_reads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub bits: u32,
    pub solver: SolverChoice,
    pub escalation: Option<Escalation>,
}

impl OracleConfig {
    pub fn exact(bits: u32) -> Self {
        Self {
            bits,
            solver: SolverChoice::exact(),
            escalation: None,
        }
    }

    pub fn anneal(bits: u32, params: AnnealParams) -> Self {
        Self {
            bits,
            solver: SolverChoice::Anneal(params),
            escalation: None,
        }
    }

    /// Runs the check, escalating on copositive verdicts when configured.
    /// Returns the final check and the number of solver calls made.
    pub fn check(&self, m: &SymMatrix) -> Result<(CopositivityCheck, usize)> {
        let mut bits = self.bits;
        let mut solver = self.solver;
        let mut calls = 1;
        let mut check = solver.solve_with(m, &Discretization::new(m.size(), bits)?)?;

        let Some(esc) = self.escalation else {
            return Ok((check, calls));
        };
        if !solver.is_stochastic() {
            return Ok((check, calls));
        }
        while check.verdict.is_copositive() {
            let SolverChoice::Anneal(params) = &mut solver else {
                break;
            };
            if params.reads * 2 <= esc.max_reads {
                params.reads *= 2;
            } else if bits < esc.max_bits {
                bits += 1;
            } else {
                break;
            }
            calls += 1;
            check = solver.solve_with(m, &Discretization::new(m.size(), bits)?)?;
        }
        Ok((check, calls))
    }
}

//! Satisfiability of integer systems with linear, quadratic and floor rows.
//!
//! Layers run in a fixed order: floor elimination, then the linear lattice
//! layer, then elimination of variables that occur linearly in a single row,
//! then complete quadratic subcases, and finally a bounded search. Each layer
//! preserves the solution set, so an UNSAT answer from a complete layer is a
//! proof and every SAT answer is re-checked against the input.

mod binary;
mod budget;
mod definite;
pub mod floors;
pub mod linear;
pub mod numtheory;
pub mod pell;
mod problem;

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json_int::JsonInt;
use crate::symbolic::{QuadExpr, SymbolicError, ZSystem};

pub use binary::{solve_binary, BinaryOutcome, BinaryQuadratic};
pub use floors::{eliminate_floors, FloorBranch};
pub use linear::{eliminate_congruences, reduce_lattice, solve_linear, LinearSolution};
pub use pell::fundamental_unit;

use budget::Budget;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("floor split needs more than {0} branches")]
    BranchLimitExceeded(u64),
    #[error("time budget exceeded")]
    TimeBudgetExceeded,
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("system still contains floor terms")]
    FloorsPresent,
}

/// Why an UNSAT answer is justified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The linear rows alone have no integer solution.
    LinearInfeasible,
    /// No solution modulo the given modulus.
    CongruenceObstruction(BigInt),
    /// A definite quadratic row has finitely many solutions, all rejected.
    DefiniteFormExhausted,
    /// A complete case analysis (binary quadratic or every floor branch)
    /// found nothing.
    BranchExhaustedComplete,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Certificate::LinearInfeasible => f.write_str("linear-infeasible"),
            Certificate::CongruenceObstruction(m) => write!(f, "congruence-obstruction({m})"),
            Certificate::DefiniteFormExhausted => f.write_str("definite-form-exhausted"),
            Certificate::BranchExhaustedComplete => f.write_str("branch-exhausted-complete"),
        }
    }
}

impl Certificate {
    pub fn parse(s: &str) -> Option<Certificate> {
        Some(match s {
            "linear-infeasible" => Certificate::LinearInfeasible,
            "definite-form-exhausted" => Certificate::DefiniteFormExhausted,
            "branch-exhausted-complete" => Certificate::BranchExhaustedComplete,
            _ => {
                let m = s
                    .strip_prefix("congruence-obstruction(")?
                    .strip_suffix(')')?
                    .parse()
                    .ok()?;
                Certificate::CongruenceObstruction(m)
            }
        })
    }
}

/// Values for the variables of a system, in registry order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub variables: Vec<String>,
    pub values: Vec<BigInt>,
}

impl Witness {
    pub fn get(&self, name: &str) -> Option<&BigInt> {
        let i = self.variables.iter().position(|v| v == name)?;
        self.values.get(i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat(Witness),
    Unsat(Certificate),
    Unknown(String),
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Sat(_) => "sat",
            Verdict::Unsat(_) => "unsat",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Sat(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Radius of the bounded search box.
    pub search_bound: u64,
    /// Maximal number of floor branches.
    pub branch_limit: u64,
    /// Maximal continued-fraction period and residue-orbit length in the
    /// Pell layer.
    pub pell_period_limit: u64,
    pub time_budget_ms: u64,
    /// Work units (search nodes, residues scanned) before giving up.
    pub node_limit: u64,
    /// When false, `Stats::millis` is always zero so that reports are
    /// byte-for-byte reproducible.
    pub record_timing: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            search_bound: 64,
            branch_limit: 10_000,
            pell_period_limit: 10_000,
            time_budget_ms: 10_000,
            node_limit: 2_000_000,
            record_timing: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let fields = [
            ("search_bound", self.search_bound),
            ("branch_limit", self.branch_limit),
            ("pell_period_limit", self.pell_period_limit),
            ("time_budget_ms", self.time_budget_ms),
            ("node_limit", self.node_limit),
        ];
        for (name, v) in fields {
            if v == 0 {
                return Err(SolverError::InvalidConfig(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub branches: u64,
    pub nodes: u64,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub verdict: Verdict,
    pub stats: Stats,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictFile {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Map<String, serde_json::Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub stats: Stats,
}

impl SolveReport {
    pub fn to_file(&self) -> VerdictFile {
        let mut file = VerdictFile {
            verdict: self.verdict.tag().to_string(),
            witness: None,
            certificate: None,
            reason: None,
            stats: self.stats,
        };
        match &self.verdict {
            Verdict::Sat(w) => {
                let map = w
                    .variables
                    .iter()
                    .zip(&w.values)
                    .map(|(n, v)| {
                        let v = serde_json::to_value(JsonInt::from(v)).expect("integers serialize");
                        (n.clone(), v)
                    })
                    .collect();
                file.witness = Some(map);
            }
            Verdict::Unsat(c) => file.certificate = Some(c.to_string()),
            Verdict::Unknown(r) => file.reason = Some(r.clone()),
        }
        file
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("verdicts serialize")
    }
}

/// True iff every row of `sys` holds at `sigma`.
pub fn verify_witness(sys: &ZSystem, sigma: &[BigInt]) -> Result<bool, SymbolicError> {
    sys.verify(sigma)
}

/// Decides `sys`. Limits never surface as errors: they turn into UNKNOWN.
pub fn solve(sys: &ZSystem, cfg: &SolverConfig) -> SolveReport {
    let start = Instant::now();
    let budget = Budget::new(cfg.node_limit, Some(cfg.time_budget_ms));
    let mut branches = 0;
    let verdict = solve_with(sys, cfg, &budget, &mut branches, true);
    finish(verdict, &budget, branches, start, cfg)
}

/// Decides a floor-free system of quadratic equations and congruences over
/// `variables`.
pub fn decide_quadratic(
    quad_eqs: &[QuadExpr],
    quad_congs: &[(QuadExpr, BigInt)],
    variables: &[String],
    cfg: &SolverConfig,
) -> Result<SolveReport, SolverError> {
    let mut sys = ZSystem::new(variables.to_vec());
    for q in quad_eqs {
        sys.push_quad_eq(q.clone());
    }
    for (q, m) in quad_congs {
        sys.push_quad_cong(q.clone(), m.clone());
    }
    if sys.has_floors() {
        return Err(SolverError::FloorsPresent);
    }
    let start = Instant::now();
    let budget = Budget::new(cfg.node_limit, Some(cfg.time_budget_ms));
    let mut branches = 0;
    let verdict = solve_with(&sys, cfg, &budget, &mut branches, false);
    Ok(finish(verdict, &budget, branches, start, cfg))
}

fn finish(
    verdict: Verdict,
    budget: &Budget,
    branches: u64,
    start: Instant,
    cfg: &SolverConfig,
) -> SolveReport {
    let millis = if cfg.record_timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    SolveReport {
        verdict,
        stats: Stats {
            branches,
            nodes: budget.used(),
            millis,
        },
    }
}

fn solve_with(
    sys: &ZSystem,
    cfg: &SolverConfig,
    budget: &Budget,
    branches: &mut u64,
    split_floors: bool,
) -> Verdict {
    if let Err(e) = cfg.validate() {
        return Verdict::Unknown(e.to_string());
    }
    // The linear rows constrain every floor branch alike.
    if solve_linear(&sys.linear_eqs, sys.variables.len()).is_none() {
        return Verdict::Unsat(Certificate::LinearInfeasible);
    }
    let split = if split_floors {
        match eliminate_floors(sys, cfg.branch_limit) {
            Ok(b) => b,
            Err(e) => return Verdict::Unknown(e.to_string()),
        }
    } else {
        vec![FloorBranch {
            residues: Vec::new(),
            system: sys.clone(),
        }]
    };
    let mut certificates: Vec<Certificate> = Vec::new();
    let mut unknown: Option<String> = None;
    for branch in &split {
        *branches += 1;
        match problem::solve_system(&branch.system, cfg, budget) {
            problem::Outcome::Sat(values) => {
                let values = values[..sys.variables.len()].to_vec();
                // A witness that fails the original system would be a bug in
                // some layer; never report it.
                if sys.verify(&values) != Ok(true) {
                    return Verdict::Unknown("internal witness failed verification".into());
                }
                return Verdict::Sat(Witness {
                    variables: sys.variables.clone(),
                    values,
                });
            }
            problem::Outcome::Unsat(c) => certificates.push(c),
            problem::Outcome::Unknown(r) => {
                unknown.get_or_insert(r);
            }
        }
    }
    if let Some(r) = unknown {
        return Verdict::Unknown(r);
    }
    match certificates.first() {
        Some(first) if certificates.iter().all(|c| c == first) => Verdict::Unsat(first.clone()),
        _ => Verdict::Unsat(Certificate::BranchExhaustedComplete),
    }
}

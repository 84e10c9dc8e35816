//! From a group equation to a verdict: symbolic reduction, integer solving,
//! and re-assembly of group elements from the integer witness.

use crate::equation::EquationWord;
use crate::malcev::{MalcevPresentation, NormalForm};
use crate::solver::{self, Certificate, SolverConfig, Stats, Verdict};
use crate::symbolic::{reduce, ZSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupVerdict {
    /// One element per equation variable, in order of first occurrence.
    Sat(Vec<(String, NormalForm)>),
    Unsat(Certificate),
    Unknown(String),
}

impl GroupVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            GroupVerdict::Sat(_) => "sat",
            GroupVerdict::Unsat(_) => "unsat",
            GroupVerdict::Unknown(_) => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSolution {
    pub verdict: GroupVerdict,
    pub system: ZSystem,
    pub stats: Stats,
}

/// Decides `eq = 1` in `p`. A SAT answer is re-checked by evaluating the
/// word at the assembled elements.
pub fn solve_equation(
    eq: &EquationWord,
    p: &MalcevPresentation,
    cfg: &SolverConfig,
) -> EquationSolution {
    let (red, system) = reduce(eq, p);
    let report = solver::solve(&system, cfg);
    let verdict = match report.verdict {
        Verdict::Sat(w) => {
            let elements = red.witness(p, &w.values);
            match eq.evaluate(p, &elements) {
                Ok(v) if v.is_identity() => GroupVerdict::Sat(
                    eq.variables().iter().cloned().zip(elements).collect(),
                ),
                _ => GroupVerdict::Unknown("witness failed group verification".into()),
            }
        }
        Verdict::Unsat(c) => GroupVerdict::Unsat(c),
        Verdict::Unknown(r) => GroupVerdict::Unknown(r),
    };
    EquationSolution {
        verdict,
        system,
        stats: report.stats,
    }
}

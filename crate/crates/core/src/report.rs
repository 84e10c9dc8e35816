//! One JSON object per solved equation, appended as a line to a results
//! file. Reports are reproducible byte for byte when timing is off.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::equation::EquationWord;
use crate::extension::{ExtensionPresentation, ExtensionSolution, ExtensionVerdict, GEquationWord};
use crate::malcev::MalcevPresentation;
use crate::pipeline::{EquationSolution, GroupVerdict};
use crate::solver::{SolverConfig, Stats};
use crate::symbolic::ZSystemFile;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchReport {
    /// Coset index per variable.
    pub assignment: Vec<usize>,
    pub equation: String,
    pub verdict: String,
}

/// Invariant: `witness` is present iff `verdict == "sat"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    /// SHA-256 of the presentation, equation and solver limits.
    pub input_digest: String,
    pub group: String,
    pub equation: String,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Variable name to value, written in the equation language.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<ZSystemFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<BranchReport>>,
    pub stats: Stats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Hex SHA-256 of the inputs that determine a verdict.
pub fn input_digest(presentation_json: &str, equation: &str, cfg: &SolverConfig) -> String {
    let mut h = Sha256::new();
    h.update(presentation_json.as_bytes());
    h.update(b"\n");
    h.update(equation.as_bytes());
    h.update(b"\n");
    h.update(
        format!(
            "{} {} {} {} {}",
            cfg.search_bound, cfg.branch_limit, cfg.pell_period_limit, cfg.time_budget_ms, cfg.node_limit
        )
        .as_bytes(),
    );
    hex::encode(h.finalize())
}

impl RunReport {
    pub fn from_group(
        label: &str,
        p: &MalcevPresentation,
        eq: &EquationWord,
        sol: &EquationSolution,
        cfg: &SolverConfig,
        seed: Option<u64>,
    ) -> RunReport {
        let equation = eq.display(p).to_string();
        let mut report = RunReport {
            input_digest: input_digest(&p.to_json(), &equation, cfg),
            group: label.to_string(),
            equation,
            verdict: sol.verdict.tag().to_string(),
            certificate: None,
            reason: None,
            witness: None,
            system: Some(sol.system.to_file()),
            branches: None,
            stats: sol.stats,
            seed,
        };
        match &sol.verdict {
            GroupVerdict::Sat(w) => {
                report.witness = Some(w.iter().map(|(n, x)| (n.clone(), x.to_word(p))).collect());
            }
            GroupVerdict::Unsat(c) => report.certificate = Some(c.to_string()),
            GroupVerdict::Unknown(r) => report.reason = Some(r.clone()),
        }
        report
    }

    pub fn from_extension(
        label: &str,
        ext: &ExtensionPresentation,
        eq: &GEquationWord,
        sol: &ExtensionSolution,
        cfg: &SolverConfig,
        seed: Option<u64>,
    ) -> RunReport {
        let equation = eq.display(ext).to_string();
        let branches = sol
            .branches
            .iter()
            .map(|(z, w, v)| BranchReport {
                assignment: z.clone(),
                equation: w.clone(),
                verdict: v.to_string(),
            })
            .collect();
        let mut report = RunReport {
            input_digest: input_digest(&ext.to_json(), &equation, cfg),
            group: label.to_string(),
            equation,
            verdict: sol.verdict.tag().to_string(),
            certificate: None,
            reason: None,
            witness: None,
            system: None,
            branches: Some(branches),
            stats: sol.stats,
            seed,
        };
        match &sol.verdict {
            ExtensionVerdict::Sat(w) => {
                report.witness = Some(w.iter().map(|(n, x)| (n.clone(), ext.render(x))).collect());
            }
            ExtensionVerdict::Unsat(c) => report.certificate = Some(c.to_string()),
            ExtensionVerdict::Unknown(r) => report.reason = Some(r.clone()),
        }
        report
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::extension::solve_in_extension;
    use crate::pipeline::solve_equation;

    fn cfg() -> SolverConfig {
        SolverConfig {
            record_timing: false,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn witness_present_iff_sat() {
        let p = catalog::heisenberg();
        for (text, verdict) in [("X a1 = 1", "sat"), ("X X a1 = 1", "unsat")] {
            let eq = EquationWord::parse(text, &p).unwrap();
            let sol = solve_equation(&eq, &p, &cfg());
            let r = RunReport::from_group("heisenberg", &p, &eq, &sol, &cfg(), Some(1));
            assert_eq!(r.verdict, verdict);
            assert_eq!(r.witness.is_some(), verdict == "sat");
        }
    }

    #[test]
    fn sat_witness_is_rendered_in_the_language() {
        let p = catalog::heisenberg();
        let eq = EquationWord::parse("X a1 = 1", &p).unwrap();
        let sol = solve_equation(&eq, &p, &cfg());
        let r = RunReport::from_group("heisenberg", &p, &eq, &sol, &cfg(), None);
        assert_eq!(r.witness.unwrap()["X"], "a1^-1");
    }

    #[test]
    fn reports_round_trip_and_repeat() {
        let ext = catalog::infinite_dihedral();
        let eq = GEquationWord::parse("X X a^2 = 1", &ext).unwrap();
        let line = |seed| {
            let sol = solve_in_extension(&ext, &eq, &cfg()).unwrap();
            RunReport::from_extension("dihedral", &ext, &eq, &sol, &cfg(), seed).to_json_line()
        };
        let a = line(Some(7));
        assert_eq!(a, line(Some(7)));
        let back: RunReport = serde_json::from_str(&a).unwrap();
        assert_eq!(back.to_json_line(), a);
        assert_eq!(back.witness.unwrap()["X"], "a^-1");
    }

    #[test]
    fn digest_depends_on_every_input() {
        let c = cfg();
        let d = input_digest("{}", "X = 1", &c);
        assert_eq!(d.len(), 64);
        assert_ne!(d, input_digest("{ }", "X = 1", &c));
        assert_ne!(d, input_digest("{}", "X X = 1", &c));
        let c2 = SolverConfig { search_bound: 3, ..c };
        assert_ne!(d, input_digest("{}", "X = 1", &c2));
    }
}

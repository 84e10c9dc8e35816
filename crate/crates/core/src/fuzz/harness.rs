use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gen::{random_equation, random_extension_equation, GenParams};
use crate::catalog;
use crate::equation::EquationWord;
use crate::extension::{solve_in_extension, ExtensionPresentation, ExtensionVerdict, GElement, GEquationWord};
use crate::malcev::MalcevPresentation;
use crate::oracle::{brute_force, brute_force_extension};
use crate::pipeline::{solve_equation, GroupVerdict};
use crate::report::RunReport;
use crate::solver::SolverConfig;

/// A group or extension with the label it was loaded under: a catalog name
/// or a file path.
#[derive(Clone, Debug)]
pub enum Target {
    Group(String, MalcevPresentation),
    Extension(String, ExtensionPresentation),
}

impl Target {
    pub fn label(&self) -> &str {
        match self {
            Target::Group(l, _) | Target::Extension(l, _) => l,
        }
    }

    /// A catalog group or extension by name.
    pub fn catalog(name: &str) -> Option<Target> {
        catalog::group(name)
            .map(|p| Target::Group(name.to_string(), p))
            .or_else(|| catalog::extension(name).map(|e| Target::Extension(name.to_string(), e)))
    }

    /// Every catalog entry, groups first.
    pub fn all_catalog() -> Vec<Target> {
        catalog::GROUP_NAMES
            .iter()
            .chain(catalog::EXTENSION_NAMES)
            .map(|n| Target::catalog(n).expect("catalog names resolve"))
            .collect()
    }

    /// A catalog group name, or a presentation JSON file.
    pub fn load_group(spec: &str) -> Result<Target, String> {
        if let Some(p) = catalog::group(spec) {
            return Ok(Target::Group(spec.to_string(), p));
        }
        let text = read(spec)?;
        MalcevPresentation::from_json(&text)
            .map(|p| Target::Group(spec.to_string(), p))
            .map_err(|e| format!("{spec}: {e}"))
    }

    /// A catalog extension name, or an extension JSON file.
    pub fn load_extension(spec: &str) -> Result<Target, String> {
        if let Some(e) = catalog::extension(spec) {
            return Ok(Target::Extension(spec.to_string(), e));
        }
        let text = read(spec)?;
        ExtensionPresentation::from_json(&text)
            .map(|e| Target::Extension(spec.to_string(), e))
            .map_err(|e| format!("{spec}: {e}"))
    }

    /// Random equation text for this target.
    pub fn random_equation<R: Rng + ?Sized>(&self, rng: &mut R, params: &GenParams) -> String {
        match self {
            Target::Group(_, p) => random_equation(rng, p, params),
            Target::Extension(_, e) => random_extension_equation(rng, e, params),
        }
    }

    /// Parses and solves `text`, returning the report.
    pub fn solve(&self, text: &str, cfg: &SolverConfig, seed: Option<u64>) -> Result<RunReport, String> {
        Ok(self.solve_checked(text, cfg, seed, None)?.0)
    }

    /// Solves `text` and, with an oracle bound, cross-checks the verdict.
    /// Returns the report and a mismatch description, if any.
    pub fn solve_checked(
        &self,
        text: &str,
        cfg: &SolverConfig,
        seed: Option<u64>,
        bound: Option<u64>,
    ) -> Result<(RunReport, Option<String>), String> {
        match self {
            Target::Group(label, p) => {
                let eq = EquationWord::parse(text, p).map_err(|e| format!("equation: {e}"))?;
                let sol = solve_equation(&eq, p, cfg);
                let mismatch = match (&sol.verdict, bound) {
                    (GroupVerdict::Sat(w), _) => {
                        let values: Vec<_> = w.iter().map(|(_, x)| x.clone()).collect();
                        let ok = eq.evaluate(p, &values).map(|v| v.is_identity()).unwrap_or(false);
                        (!ok).then(|| "SAT witness does not evaluate to 1".to_string())
                    }
                    (GroupVerdict::Unsat(c), Some(b)) => brute_force(&eq, p, b).is_found().then(|| {
                        format!("solver UNSAT ({c}) but the oracle finds a witness at B = {b}")
                    }),
                    _ => None,
                };
                Ok((RunReport::from_group(label, p, &eq, &sol, cfg, seed), mismatch))
            }
            Target::Extension(label, ext) => {
                let eq = GEquationWord::parse(text, ext).map_err(|e| format!("equation: {e}"))?;
                let sol = solve_in_extension(ext, &eq, cfg).map_err(|e| e.to_string())?;
                let mismatch = match (&sol.verdict, bound) {
                    (ExtensionVerdict::Sat(w), _) => {
                        let values: Vec<GElement> = w.iter().map(|(_, x)| x.clone()).collect();
                        let ok = eq.evaluate(ext, &values).map(|v| v == ext.identity()).unwrap_or(false);
                        (!ok).then(|| "SAT witness does not evaluate to 1".to_string())
                    }
                    (ExtensionVerdict::Unsat(c), Some(b)) => brute_force_extension(&eq, ext, b).is_found().then(|| {
                        format!("solver UNSAT ({c}) but the oracle finds a witness at B = {b}")
                    }),
                    _ => None,
                };
                Ok((RunReport::from_extension(label, ext, &eq, &sol, cfg, seed), mismatch))
            }
        }
    }
}

fn read(path: &str) -> Result<String, String> {
    if !Path::new(path).exists() {
        return Err(format!("{path}: not a catalog name and no such file"));
    }
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

/// Corpus shape. Case `i` draws its target and equation from a generator
/// seeded by `(seed, i)`, so cases are independent of the worker count.
#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub cases: usize,
    /// Oracle box radius.
    pub bound: u64,
    pub params: GenParams,
    pub targets: Vec<Target>,
    pub workers: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            cases: 200,
            bound: 3,
            params: GenParams::default(),
            targets: Target::all_catalog(),
            workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub index: usize,
    pub report: RunReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<String>,
    /// Command line that reruns exactly this case.
    pub replay: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub sat: usize,
    pub unsat: usize,
    pub unknown: usize,
    pub mismatches: usize,
    pub cases: Vec<CaseOutcome>,
}

impl FuzzSummary {
    pub fn failures(&self) -> impl Iterator<Item = &CaseOutcome> {
        self.cases.iter().filter(|c| c.mismatch.is_some())
    }
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(
            f,
            "cases={} sat={} unsat={} unknown={} mismatches={}",
            self.cases.len(),
            self.sat,
            self.unsat,
            self.unknown,
            self.mismatches
        )
    }
}

/// `(target index, equation text)` of case `index`.
pub fn case_input(config: &FuzzConfig, seed: u64, index: usize) -> (usize, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let t = rng.gen_range(0..config.targets.len());
    (t, config.targets[t].random_equation(&mut rng, &config.params))
}

pub fn replay_line(target: &Target, text: &str, bound: u64, seed: u64) -> String {
    let flag = match target {
        Target::Group(..) => "--group",
        Target::Extension(..) => "--extension",
    };
    format!(
        "nilsolve fuzz {flag} {} --equation {} --bound {bound} --seed {seed}",
        shell_quote(target.label()),
        shell_quote(text)
    )
}

fn shell_quote(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_-./:".contains(c)) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

/// Runs one case with the oracle cross-check.
pub fn run_case(
    target: &Target,
    text: &str,
    index: usize,
    bound: u64,
    cfg: &SolverConfig,
    seed: u64,
) -> CaseOutcome {
    let replay = replay_line(target, text, bound, seed);
    match target.solve_checked(text, cfg, Some(seed), Some(bound)) {
        Ok((report, mismatch)) => CaseOutcome {
            index,
            report,
            mismatch,
            replay,
        },
        Err(e) => CaseOutcome {
            index,
            report: RunReport {
                input_digest: String::new(),
                group: target.label().to_string(),
                equation: text.to_string(),
                verdict: "unknown".into(),
                certificate: None,
                reason: Some(e.clone()),
                witness: None,
                system: None,
                branches: None,
                stats: Default::default(),
                seed: Some(seed),
            },
            mismatch: Some(format!("generated equation rejected: {e}")),
            replay,
        },
    }
}

/// Generates and checks `config.cases` cases on up to `config.workers`
/// threads. The summary lists cases in index order.
pub fn fuzz_corpus(config: &FuzzConfig, cfg: &SolverConfig, seed: u64) -> FuzzSummary {
    let workers = config.workers.clamp(1, config.cases.max(1));
    let mut slots: Vec<Option<CaseOutcome>> = vec![None; config.cases];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..config.cases)
                        .step_by(workers)
                        .map(|i| {
                            let (t, text) = case_input(config, seed, i);
                            run_case(&config.targets[t], &text, i, config.bound, cfg, seed)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for case in h.join().expect("fuzz worker panicked") {
                let i = case.index;
                slots[i] = Some(case);
            }
        }
    });
    let mut summary = FuzzSummary::default();
    for case in slots.into_iter().map(|c| c.expect("every case ran")) {
        match case.report.verdict.as_str() {
            "sat" => summary.sat += 1,
            "unsat" => summary.unsat += 1,
            _ => summary.unknown += 1,
        }
        if case.mismatch.is_some() {
            summary.mismatches += 1;
        }
        summary.cases.push(case);
    }
    summary
}

//! `nilsolve`: decide, reduce and brute-force single equations from the
//! command line.
//!
//! Exit codes: 0 SAT (or success), 1 UNSAT, 2 UNKNOWN, 64 usage error,
//! 65 input error, 70 fuzz mismatch.

use std::fs::OpenOptions;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilsolve::equation::EquationWord;
use nilsolve::extension::GEquationWord;
use nilsolve::fuzz::{fuzz_corpus, run_case, FuzzConfig, FuzzSummary, GenParams, Target};
use nilsolve::oracle::{brute_force, brute_force_extension, OracleOutcome};
use nilsolve::report::RunReport;
use nilsolve::solver::SolverConfig;
use nilsolve::symbolic::reduce;

const EXIT_SAT: u8 = 0;
const EXIT_UNSAT: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_INPUT: u8 = 65;
const EXIT_MISMATCH: u8 = 70;

#[derive(Parser, Debug)]
#[command(name = "nilsolve", version, about = "Equations in class-2 nilpotent groups and their finite extensions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a presentation or extension file.
    Check {
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Decide equations and report verdicts and witnesses.
    Solve {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        input: EquationArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Print the integer system of an equation as JSON.
    Reduce {
        /// Catalog group name or presentation JSON file.
        #[arg(long)]
        group: String,
        #[command(flatten)]
        input: EquationArgs,
    },
    /// Search a bounded box for a solution by plain evaluation.
    Oracle {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        input: EquationArgs,
        /// Box radius for the `a` and `c` exponents.
        #[arg(long, default_value_t = 3)]
        bound: u64,
    },
    /// Compare the solver with the oracle on random or given equations.
    Fuzz {
        /// Catalog group name or presentation JSON file; all catalog
        /// entries when neither this nor `--extension` is given.
        #[arg(long, conflicts_with = "extension")]
        group: Option<String>,
        /// Catalog extension name or extension JSON file.
        #[arg(long)]
        extension: Option<String>,
        /// Check these equations instead of random ones.
        #[command(flatten)]
        input: OptionalEquationArgs,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 3)]
        bound: u64,
        /// Upper limit on occurrences per random equation; 0 gives
        /// constant equations.
        #[arg(long, default_value_t = 3)]
        max_occurrences: usize,
        #[arg(long, default_value_t = 2)]
        max_vars: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct TargetArgs {
    /// Catalog group name or presentation JSON file.
    #[arg(long)]
    group: Option<String>,
    /// Catalog extension name or extension JSON file.
    #[arg(long)]
    extension: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct EquationArgs {
    /// Equation text, e.g. "X a1 = 1".
    #[arg(long)]
    equation: Option<String>,
    /// File with one equation per line; blank lines and `#` comments are
    /// skipped.
    #[arg(long)]
    equations: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = false, multiple = false)]
struct OptionalEquationArgs {
    #[arg(long)]
    equation: Option<String>,
    #[arg(long)]
    equations: Option<String>,
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// Radius of the solver's bounded search.
    #[arg(long, default_value_t = SolverConfig::default().search_bound)]
    search_bound: u64,
    #[arg(long, default_value_t = SolverConfig::default().time_budget_ms)]
    time_budget_ms: u64,
    #[arg(long, env = "NILSOLVE_SEED", default_value_t = 0)]
    seed: u64,
    /// Record wall-clock time in reports; off keeps reports reproducible.
    #[arg(long)]
    timing: bool,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            search_bound: self.search_bound,
            time_budget_ms: self.time_budget_ms,
            record_timing: self.timing,
            ..SolverConfig::default()
        }
    }
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Append one JSON report per line to this file.
    #[arg(long)]
    out: Option<String>,
}

/// An error with its exit code.
struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INPUT, msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_SAT });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("nilsolve: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check { target } => check(cli.format, target),
        Command::Solve {
            target,
            input,
            solver,
            out,
        } => solve(cli.format, target, input, solver, out),
        Command::Reduce { group, input } => reduce_cmd(group, input),
        Command::Oracle { target, input, bound } => oracle(cli.format, target, input, *bound),
        Command::Fuzz {
            group,
            extension,
            input,
            cases,
            bound,
            max_occurrences,
            max_vars,
            workers,
            solver,
            out,
        } => {
            let targets = match (group, extension) {
                (Some(g), _) => vec![Target::load_group(g).map_err(input_error)?],
                (_, Some(e)) => vec![Target::load_extension(e).map_err(input_error)?],
                _ => Target::all_catalog(),
            };
            let config = FuzzConfig {
                cases: *cases,
                bound: *bound,
                params: GenParams {
                    max_vars: *max_vars,
                    max_occurrences: *max_occurrences,
                    ..GenParams::default()
                },
                targets,
                workers: *workers,
            };
            fuzz(cli.format, config, input, solver, out)
        }
    }
}

fn load_target(t: &TargetArgs) -> Result<Target, Failure> {
    match (&t.group, &t.extension) {
        (Some(g), _) => Target::load_group(g).map_err(input_error),
        (_, Some(e)) => Target::load_extension(e).map_err(input_error),
        _ => Err(Failure(EXIT_USAGE, "one of --group or --extension is required".into())),
    }
}

/// Equations from `--equation` or the lines of `--equations`.
fn equations(equation: &Option<String>, file: &Option<String>) -> Result<Vec<String>, Failure> {
    if let Some(e) = equation {
        return Ok(vec![e.clone()]);
    }
    let path = file.as_ref().ok_or_else(|| Failure(EXIT_USAGE, "an equation is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{path}: {e}")))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn append(out: &OutArgs, lines: &[String]) -> Result<(), Failure> {
    let Some(path) = &out.out else { return Ok(()) };
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| input_error(format!("{path}: {e}")))?;
    for l in lines {
        writeln!(f, "{l}").map_err(|e| input_error(format!("{path}: {e}")))?;
    }
    Ok(())
}

fn verdict_code(verdict: &str) -> u8 {
    match verdict {
        "sat" => EXIT_SAT,
        "unsat" => EXIT_UNSAT,
        _ => EXIT_UNKNOWN,
    }
}

fn check(format: Format, t: &TargetArgs) -> Outcome {
    let target = load_target(t)?;
    let (kind, generators) = match &target {
        Target::Group(_, p) => ("group", p.generator_count()),
        Target::Extension(_, e) => ("extension", e.base().generator_count()),
    };
    match format {
        Format::Json => println!(
            "{}",
            serde_json::json!({"valid": true, "kind": kind, "name": target.label(), "generators": generators})
        ),
        Format::Text => println!("ok: {kind} {} with {generators} generators", target.label()),
    }
    Ok(EXIT_SAT)
}

fn print_report(format: Format, r: &RunReport) {
    match format {
        Format::Json => println!("{}", r.to_json_line()),
        Format::Text => {
            let detail = match (&r.witness, &r.certificate, &r.reason) {
                (Some(w), _, _) => w.iter().map(|(k, v)| format!("{k} = {v}")).collect::<Vec<_>>().join(", "),
                (_, Some(c), _) => c.clone(),
                (_, _, Some(reason)) => reason.clone(),
                _ => String::new(),
            };
            println!("{}: {} {}", r.equation, r.verdict, detail);
        }
    }
}

fn solve(format: Format, t: &TargetArgs, input: &EquationArgs, solver: &SolverArgs, out: &OutArgs) -> Outcome {
    let target = load_target(t)?;
    let cfg = solver.config();
    let mut lines = Vec::new();
    let mut code = EXIT_SAT;
    for text in equations(&input.equation, &input.equations)? {
        let report = target
            .solve(&text, &cfg, Some(solver.seed))
            .map_err(|e| input_error(format!("`{text}`: {e}")))?;
        print_report(format, &report);
        code = code.max(verdict_code(&report.verdict));
        lines.push(report.to_json_line());
    }
    append(out, &lines)?;
    Ok(code)
}

fn reduce_cmd(group: &str, input: &EquationArgs) -> Outcome {
    let Target::Group(_, p) = Target::load_group(group).map_err(input_error)? else {
        unreachable!("load_group returns groups")
    };
    for text in equations(&input.equation, &input.equations)? {
        let eq = EquationWord::parse(&text, &p).map_err(|e| input_error(format!("`{text}`: {e}")))?;
        let (_, sys) = reduce(&eq, &p);
        println!("{}", serde_json::to_string(&sys.to_file()).expect("systems serialize"));
    }
    Ok(EXIT_SAT)
}

fn oracle(format: Format, t: &TargetArgs, input: &EquationArgs, bound: u64) -> Outcome {
    let target = load_target(t)?;
    let mut code = EXIT_SAT;
    for text in equations(&input.equation, &input.equations)? {
        let bad = |e: &dyn std::fmt::Display| input_error(format!("`{text}`: {e}"));
        let (vars, found): (Vec<String>, Option<Vec<String>>) = match &target {
            Target::Group(_, p) => {
                let eq = EquationWord::parse(&text, p).map_err(|e| bad(&e))?;
                let found = match brute_force(&eq, p, bound) {
                    OracleOutcome::Found(v) => Some(v.iter().map(|x| x.to_word(p)).collect()),
                    OracleOutcome::NotFound(_) => None,
                };
                (eq.variables().to_vec(), found)
            }
            Target::Extension(_, ext) => {
                let eq = GEquationWord::parse(&text, ext).map_err(|e| bad(&e))?;
                let found = match brute_force_extension(&eq, ext, bound) {
                    OracleOutcome::Found(v) => Some(v.iter().map(|x| ext.render(x)).collect()),
                    OracleOutcome::NotFound(_) => None,
                };
                (eq.variables().to_vec(), found)
            }
        };
        if found.is_none() {
            code = EXIT_UNSAT;
        }
        match (format, found) {
            (Format::Json, Some(w)) => {
                let w: serde_json::Map<_, _> = vars.into_iter().zip(w.into_iter().map(Into::into)).collect();
                println!("{}", serde_json::json!({"equation": text, "bound": bound, "found": true, "witness": w}));
            }
            (Format::Json, None) => {
                println!("{}", serde_json::json!({"equation": text, "bound": bound, "found": false}));
            }
            (Format::Text, Some(w)) => {
                let w: Vec<String> = vars.iter().zip(&w).map(|(k, v)| format!("{k} = {v}")).collect();
                println!("{text}: found {}", w.join(", "));
            }
            (Format::Text, None) => println!("{text}: not found (B = {bound})"),
        }
    }
    Ok(code)
}

fn fuzz(format: Format, config: FuzzConfig, input: &OptionalEquationArgs, solver: &SolverArgs, out: &OutArgs) -> Outcome {
    let cfg = solver.config();
    let summary = if input.equation.is_some() || input.equations.is_some() {
        let target = match config.targets.as_slice() {
            [t] => t,
            _ => {
                return Err(Failure(
                    EXIT_USAGE,
                    "--equation needs exactly one --group or --extension".into(),
                ))
            }
        };
        let mut s = FuzzSummary::default();
        for (i, text) in equations(&input.equation, &input.equations)?.iter().enumerate() {
            let case = run_case(target, text, i, config.bound, &cfg, solver.seed);
            match case.report.verdict.as_str() {
                "sat" => s.sat += 1,
                "unsat" => s.unsat += 1,
                _ => s.unknown += 1,
            }
            s.mismatches += usize::from(case.mismatch.is_some());
            s.cases.push(case);
        }
        s
    } else {
        fuzz_corpus(&config, &cfg, solver.seed)
    };
    let lines: Vec<String> = summary.cases.iter().map(|c| c.report.to_json_line()).collect();
    append(out, &lines)?;
    for case in summary.failures() {
        eprintln!(
            "mismatch in case {}: {}\n  {}\n  replay: {}",
            case.index,
            case.mismatch.as_deref().unwrap_or_default(),
            case.report.equation,
            case.replay
        );
    }
    match format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "cases": summary.cases.len(),
                "sat": summary.sat,
                "unsat": summary.unsat,
                "unknown": summary.unknown,
                "mismatches": summary.mismatches,
            })
        ),
        Format::Text => println!("{summary}"),
    }
    Ok(if summary.mismatches > 0 { EXIT_MISMATCH } else { EXIT_SAT })
}

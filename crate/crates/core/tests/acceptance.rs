//! Acceptance suite: one PASS or FAIL line per criterion. Runs without the
//! libtest harness so the lines print in order; exits nonzero on any FAIL.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nilsolve::catalog;
use nilsolve::equation::EquationWord;
use nilsolve::extension::{solve_in_extension, ExtensionPresentation, ExtensionVerdict, GElement, GEquationWord};
use nilsolve::fuzz::{random_equation, random_extension_equation, GenParams};
use nilsolve::malcev::{MalcevPresentation, NormalForm};
use nilsolve::oracle::{brute_force, brute_force_extension, element_box};
use nilsolve::pipeline::{solve_equation, GroupVerdict};
use nilsolve::report::RunReport;
use nilsolve::solver::{self, fundamental_unit, Certificate, SolverConfig, Verdict};
use nilsolve::symbolic::{reduce, ZSystem};

const EX31: &str = "X b a1 c X a2 c^-3 a1 X = 1";

struct Outcome {
    pass: bool,
    detail: String,
    /// JSON report lines, compared across reruns.
    reports: Vec<String>,
}

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

fn cfg() -> SolverConfig {
    SolverConfig {
        record_timing: false,
        ..SolverConfig::default()
    }
}

fn group_report(label: &str, p: &MalcevPresentation, eq: &EquationWord, seed: u64) -> (GroupVerdict, String) {
    let sol = solve_equation(eq, p, &cfg());
    let line = RunReport::from_group(label, p, eq, &sol, &cfg(), Some(seed)).to_json_line();
    (sol.verdict, line)
}

/// Integer point whose blocks hold the given per-variable exponent vectors.
fn sigma_of(blocks: &[Vec<usize>], values: &[Vec<BigInt>], len: usize) -> Vec<BigInt> {
    let mut sigma = vec![BigInt::zero(); len];
    for (block, v) in blocks.iter().zip(values) {
        for (&i, x) in block.iter().zip(v) {
            sigma[i] = x.clone();
        }
    }
    sigma
}

/// The hand-derived system for the worked example, row by row.
fn reference_rows(x: &[i64; 5]) -> [i64; 5] {
    let [x1, x2, x3, x4, x5] = *x;
    [
        3 * x1 + 2,
        3 * x2 + 1,
        x3 + 1,
        3 * x1 * x2 + x1 + x3 + Integer::div_floor(&(x3 + 1), &2) + 3 * x4 - 3,
        x1 * x3 + x2 * x3 + x3 + x5 + 1,
    ]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let p = catalog::example31();
    let eq = EquationWord::parse(EX31, &p).unwrap();
    let (_, sys) = reduce(&eq, &p);
    let (verdict, line) = group_report("example31", &p, &eq, 1);
    let linear = verdict == GroupVerdict::Unsat(Certificate::LinearInfeasible);
    let shape = sys.linear_eqs.len() == 2
        && sys.linear_congs.len() == 1
        && sys.linear_congs[0].1 == b(2)
        && sys.quad_eqs.len() == 1
        && sys.quad_congs.len() == 1
        && sys.quad_congs[0].1 == b(2);
    let mut disagree = [0usize; 5];
    let mut points = 0;
    if shape {
        let mut x = [-3i64; 5];
        loop {
            points += 1;
            let sigma: Vec<BigInt> = x.iter().map(|&v| b(v)).collect();
            let ours = [
                sys.linear_eqs[0].eval(&sigma).unwrap(),
                sys.linear_eqs[1].eval(&sigma).unwrap(),
                sys.linear_congs[0].0.eval(&sigma).unwrap(),
                sys.quad_eqs[0].eval(&sigma).unwrap(),
                sys.quad_congs[0].0.eval(&sigma).unwrap(),
            ];
            for (k, (o, r)) in ours.iter().zip(reference_rows(&x)).enumerate() {
                if *o != b(r) {
                    disagree[k] += 1;
                }
            }
            let mut i = 0;
            while i < 5 && x[i] == 3 {
                x[i] = -3;
                i += 1;
            }
            if i == 5 {
                break;
            }
            x[i] += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = linear && shape && disagree.iter().all(|&d| d == 0) && elapsed < Duration::from_secs(1);
    Outcome {
        pass,
        detail: format!(
            "verdict {} ({}), row shape {}, rows disagreeing at {:?} of {points} points, {} ms",
            verdict_tag(&verdict),
            if linear { "linear certificate" } else { "other certificate" },
            if shape { "ok" } else { "differs" },
            disagree,
            elapsed.as_millis()
        ),
        reports: vec![line],
    }
}

fn verdict_tag(v: &GroupVerdict) -> String {
    match v {
        GroupVerdict::Sat(_) => "sat".into(),
        GroupVerdict::Unsat(c) => format!("unsat {c}"),
        GroupVerdict::Unknown(r) => format!("unknown {r}"),
    }
}

/// Solutions `(x, y)` with `x` in `xs` and `y` in `ys` of a two-variable
/// equation over `Z`, the `c` parts held at zero. Also checks that the
/// system and evaluation agree at every point.
fn integer_solutions(
    p: &MalcevPresentation,
    text: &str,
    xs: std::ops::RangeInclusive<i64>,
    ys: std::ops::RangeInclusive<i64>,
) -> (Vec<(i64, i64)>, bool, GroupVerdict, String) {
    let eq = EquationWord::parse(text, p).unwrap();
    let (red, sys) = reduce(&eq, p);
    let mut sols = Vec::new();
    let mut agree = true;
    for x in xs {
        for y in ys.clone() {
            let values = [vec![b(x), b(0)], vec![b(y), b(0)]];
            let sigma = sigma_of(&red.blocks, &values, red.variables.len());
            let holds = sys.verify(&sigma).unwrap();
            let elems: Vec<NormalForm> = values.iter().map(|v| NormalForm::from_vec(p, v).unwrap()).collect();
            agree &= holds == eq.evaluate(p, &elems).unwrap().is_identity();
            if holds {
                sols.push((x, y));
            }
        }
    }
    let (verdict, line) = group_report("integers", p, &eq, 2);
    (sols, agree, verdict, line)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let p = catalog::integers();
    let (sols, agree, verdict, line) = integer_solutions(&p, "X^2 a^3 Y^2 a^-3 Y^-1 a = 1", -10..=10, -25..=25);
    let expected: Vec<(i64, i64)> = (-10..=10).map(|x| (x, -2 * x - 1)).collect();
    let elapsed = start.elapsed();
    let sat = matches!(verdict, GroupVerdict::Sat(_));
    Outcome {
        pass: sat && agree && sols == expected && elapsed < Duration::from_secs(1),
        detail: format!(
            "verdict {}, {} solutions on the box, {} expected, evaluation agrees: {agree}, {} ms",
            verdict_tag(&verdict),
            sols.len(),
            if sols == expected { "matches {(x, -2x-1)}" } else { "does not match {(x, -2x-1)}" },
            elapsed.as_millis()
        ),
        reports: vec![line],
    }
}

fn criterion_3() -> Outcome {
    let p = catalog::integers();
    let (sols, agree, verdict, line) = integer_solutions(&p, "X psi:Y^-1 = 1", -10..=10, -10..=10);
    let expected: Vec<(i64, i64)> = (-10..=10).map(|x| (x, -x)).collect();
    let sat = matches!(verdict, GroupVerdict::Sat(_));
    Outcome {
        pass: sat && agree && sols == expected,
        detail: format!(
            "verdict {}, solution set {} {{(x, -x)}}, evaluation agrees: {agree}",
            verdict_tag(&verdict),
            if sols == expected { "equals" } else { "differs from" }
        ),
        reports: vec![line],
    }
}

type Mat = [[i128; 3]; 3];

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    let mut z = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            z[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    z
}

/// Unitriangular matrix of `a1^x a2^y c^z` with `c = a1^-1 a2^-1 a1 a2`.
fn heis_matrix(x: i128, y: i128, z: i128, c: i128) -> Mat {
    let a1 = [[1, x, 0], [0, 1, 0], [0, 0, 1]];
    let a2 = [[1, 0, 0], [0, 1, y], [0, 0, 1]];
    let cz = [[1, 0, c * z], [0, 1, 0], [0, 0, 1]];
    mat_mul(&mat_mul(&a1, &a2), &cz)
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let p = catalog::heisenberg();
    // The commutator's only nonzero off-diagonal entry.
    let inv1 = [[1, -1, 0], [0, 1, 0], [0, 0, 1]];
    let inv2 = [[1, 0, 0], [0, 1, -1], [0, 0, 1]];
    let comm = mat_mul(
        &mat_mul(&mat_mul(&inv1, &inv2), &heis_matrix(1, 0, 0, 0)),
        &heis_matrix(0, 1, 0, 0),
    );
    let c = comm[0][2];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = 0;
    for _ in 0..10_000 {
        let u: Vec<i128> = (0..3).map(|_| rng.gen_range(-50..=50)).collect();
        let v: Vec<i128> = (0..3).map(|_| rng.gen_range(-50..=50)).collect();
        let nf = |w: &[i128]| NormalForm::from_vec(&p, &w.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).unwrap();
        let got = p.multiply(&nf(&u), &nf(&v)).to_vec();
        let m = mat_mul(&heis_matrix(u[0], u[1], u[2], c), &heis_matrix(v[0], v[1], v[2], c));
        let (x, y) = (m[0][1], m[1][2]);
        let z = (m[0][2] - x * y) / c;
        let want = [x, y, z].map(BigInt::from);
        if got != want || heis_matrix(x, y, z, c) != m {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failures == 0 && c.abs() == 1 && elapsed < Duration::from_secs(5),
        detail: format!("10000 products, {failures} disagreements with 3x3 matrices, {} ms", elapsed.as_millis()),
        reports: Vec::new(),
    }
}

fn criterion_5() -> Outcome {
    let p = catalog::example31();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let e = NormalForm::identity(&p);
    let comm = |g: &NormalForm, h: &NormalForm| p.product([&p.invert(g), &p.invert(h), g, h]);
    let mut failures = 0;
    for _ in 0..1000 {
        let (g, h, k) = (
            NormalForm::random(&p, &mut rng, 20),
            NormalForm::random(&p, &mut rng, 20),
            NormalForm::random(&p, &mut rng, 20),
        );
        let (gi, hi) = (p.invert(&g), p.invert(&h));
        let checks = [
            p.multiply(&p.multiply(&g, &h), &k) == p.multiply(&g, &p.multiply(&h, &k)),
            p.multiply(&g, &e) == g && p.multiply(&e, &g) == g,
            p.multiply(&g, &gi).is_identity() && p.multiply(&gi, &g).is_identity(),
            comm(&gi, &hi) == comm(&g, &h),
            comm(&gi, &h) == p.invert(&comm(&g, &h)),
            p.commutator(&g, &h) == comm(&g, &h),
            comm(&g, &h).is_central(),
        ];
        failures += checks.iter().filter(|&&ok| !ok).count();
    }
    Outcome {
        pass: failures == 0,
        detail: format!("1000 triples, associativity, identity, inverses and commutator identities, {failures} failures"),
        reports: Vec::new(),
    }
}

/// The random corpus shared by criteria 6 and 7: 100 equations on each of
/// two catalog groups.
fn corpus() -> Vec<(&'static str, MalcevPresentation, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut out = Vec::new();
    for (name, p) in [("example31", catalog::example31()), ("heisenberg", catalog::heisenberg())] {
        for _ in 0..100 {
            let text = random_equation(&mut rng, &p, &GenParams::default());
            out.push((name, p.clone(), text));
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut points = 0u64;
    let mut mismatches = 0u64;
    for (_, p, text) in corpus() {
        let eq = EquationWord::parse(&text, &p).unwrap();
        let (red, sys) = reduce(&eq, &p);
        let bound = if p.t() == 0 { 2 } else { 1 };
        let elems = element_box(&p, bound);
        let n = eq.variables().len();
        let mut idx = vec![0usize; n];
        loop {
            let values: Vec<NormalForm> = idx.iter().map(|&i| elems[i].clone()).collect();
            let vecs: Vec<Vec<BigInt>> = values.iter().map(NormalForm::to_vec).collect();
            let sigma = sigma_of(&red.blocks, &vecs, red.variables.len());
            if sys.verify(&sigma).unwrap() != eq.evaluate(&p, &values).unwrap().is_identity() {
                mismatches += 1;
            }
            points += 1;
            let mut i = 0;
            while i < n && idx[i] + 1 == elems.len() {
                idx[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            idx[i] += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: mismatches == 0 && elapsed < Duration::from_secs(120),
        detail: format!("200 equations, {points} box assignments, {mismatches} mismatches, {} ms", elapsed.as_millis()),
        reports: Vec::new(),
    }
}

fn criterion_7() -> Outcome {
    let (mut sat, mut unsat, mut unknown, mut bad) = (0, 0, 0, Vec::new());
    let mut reports = Vec::new();
    for (i, (name, p, text)) in corpus().into_iter().enumerate() {
        let eq = EquationWord::parse(&text, &p).unwrap();
        let (verdict, line) = group_report(name, &p, &eq, 7);
        reports.push(line);
        match &verdict {
            GroupVerdict::Sat(w) => {
                sat += 1;
                let values: Vec<NormalForm> = w.iter().map(|(_, x)| x.clone()).collect();
                if !eq.evaluate(&p, &values).unwrap().is_identity() {
                    bad.push(format!("#{i} {text}: witness fails"));
                }
            }
            GroupVerdict::Unsat(_) => {
                unsat += 1;
                if brute_force(&eq, &p, 4).is_found() {
                    bad.push(format!("#{i} {text}: UNSAT but the oracle finds a witness"));
                }
            }
            GroupVerdict::Unknown(_) => unknown += 1,
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "sat {sat}, unsat {unsat}, unknown {unknown}, {} incoherent{}",
            bad.len(),
            bad.first().map(|s| format!(" (first: {s})")).unwrap_or_default()
        ),
        reports,
    }
}

fn extension_check(
    label: &str,
    ext: &ExtensionPresentation,
    text: &str,
    reports: &mut Vec<String>,
) -> Result<&'static str, String> {
    let eq = GEquationWord::parse(text, ext).map_err(|e| e.to_string())?;
    let sol = solve_in_extension(ext, &eq, &cfg()).map_err(|e| e.to_string())?;
    reports.push(RunReport::from_extension(label, ext, &eq, &sol, &cfg(), Some(8)).to_json_line());
    let found = brute_force_extension(&eq, ext, 4).is_found();
    match &sol.verdict {
        ExtensionVerdict::Sat(w) => {
            let values: Vec<GElement> = w.iter().map(|(_, x)| x.clone()).collect();
            if eq.evaluate(ext, &values).unwrap() != ext.identity() {
                return Err(format!("{text}: witness fails"));
            }
        }
        ExtensionVerdict::Unsat(_) if found => return Err(format!("{text}: UNSAT but the oracle finds a witness")),
        _ => {}
    }
    Ok(sol.verdict.tag())
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut reports = Vec::new();
    let mut bad = Vec::new();
    let mut tally = std::collections::BTreeMap::new();
    for (label, ext) in [("dihedral", catalog::infinite_dihedral()), ("heisenberg_c2", catalog::heisenberg_c2())] {
        for _ in 0..100 {
            let text = random_extension_equation(&mut rng, &ext, &GenParams::default());
            match extension_check(label, &ext, &text, &mut reports) {
                Ok(tag) => *tally.entry(tag).or_insert(0) += 1,
                Err(e) => bad.push(format!("{label}: {e}")),
            }
        }
    }
    let dihedral = catalog::infinite_dihedral();
    let hand = [
        extension_check("dihedral", &dihedral, "X X a = 1", &mut reports),
        extension_check("dihedral", &dihedral, "X X a^2 = 1", &mut reports),
    ];
    let hand_ok = hand[0] == Ok("unsat") && hand[1] == Ok("sat");
    Outcome {
        pass: bad.is_empty() && hand_ok,
        detail: format!(
            "200 equations {tally:?}, {} inconsistent, X X a = 1 -> {:?}, X X a^2 = 1 -> {:?}",
            bad.len(),
            hand[0],
            hand[1]
        ),
        reports,
    }
}

fn system(json: &str) -> ZSystem {
    ZSystem::from_json(json).unwrap()
}

fn criterion_9() -> Outcome {
    let mut reports = Vec::new();
    let mut parts = Vec::new();
    let mut pass = true;
    let unit = fundamental_unit(&b(13), 1000);
    let unit_ok = unit == Some((b(649), b(180)));
    pass &= unit_ok;
    parts.push(format!("fundamental unit of 13: {unit:?}"));

    let pell = r#"{"variables":["X","Y"],"linear_eqs":[],"linear_congs":[],
        "quad_eqs":[{"const":-1,"lin":[],"quad":[["X","X",1],["Y","Y",-13]],"floors":[]}],"quad_congs":[]}"#;
    // X ≡ 649 (mod 1300) excludes the trivial solutions (±1, 0)
    let nontrivial = r#"{"variables":["X","Y"],"linear_eqs":[],
        "linear_congs":[{"expr":{"const":-649,"lin":[["X",1]],"quad":[],"floors":[]},"mod":1300}],
        "quad_eqs":[{"const":-1,"lin":[],"quad":[["X","X",1],["Y","Y",-13]],"floors":[]}],"quad_congs":[]}"#;
    let sum = r#"{"variables":["X","Y"],"linear_eqs":[],"linear_congs":[],
        "quad_eqs":[{"const":1,"lin":[],"quad":[["X","X",1],["Y","Y",1]],"floors":[]}],"quad_congs":[]}"#;
    for (name, json, want_sat) in [
        ("X^2 - 13Y^2 = 1", pell, true),
        ("X^2 - 13Y^2 = 1, X = 649 mod 1300", nontrivial, true),
        ("X^2 + Y^2 + 1 = 0", sum, false),
    ] {
        let sys = system(json);
        let start = Instant::now();
        let r = solver::solve(&sys, &cfg());
        let elapsed = start.elapsed();
        reports.push(r.to_json());
        let ok = match &r.verdict {
            Verdict::Sat(w) => want_sat && sys.verify(&w.values).unwrap(),
            Verdict::Unsat(_) => !want_sat,
            Verdict::Unknown(_) => false,
        };
        pass &= ok && elapsed < Duration::from_secs(1);
        let shown = match &r.verdict {
            Verdict::Sat(w) => format!(
                "sat ({})",
                w.values.iter().map(|v| v.to_i64().map_or(v.to_string(), |x| x.to_string())).collect::<Vec<_>>().join(", ")
            ),
            v => v.tag().to_string(),
        };
        parts.push(format!("{name} -> {shown} in {} ms", elapsed.as_millis()));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
        reports,
    }
}

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 9] = [
    ("worked example", criterion_1),
    ("integer example", criterion_2),
    ("twisted integer example", criterion_3),
    ("collection against matrices", criterion_4),
    ("group axioms and commutator identities", criterion_5),
    ("reduction soundness on boxes", criterion_6),
    ("solver and oracle coherence", criterion_7),
    ("extension pipeline", criterion_8),
    ("binary quadratic spot checks", criterion_9),
];

fn main() -> ExitCode {
    let mut all = true;
    let mut first_run = Vec::new();
    for (i, (name, run)) in CRITERIA.iter().enumerate() {
        let out = run();
        all &= out.pass;
        println!("{} criterion {} ({name}): {}", if out.pass { "PASS" } else { "FAIL" }, i + 1, out.detail);
        first_run.push(out.reports);
    }
    let second_run: Vec<Vec<String>> = CRITERIA.iter().map(|(_, run)| run().reports).collect();
    let lines: usize = first_run.iter().map(Vec::len).sum();
    let same = first_run == second_run;
    all &= same;
    println!(
        "{} criterion 10 (determinism): {lines} JSON reports {} on rerun",
        if same { "PASS" } else { "FAIL" },
        if same { "byte-identical" } else { "differ" }
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

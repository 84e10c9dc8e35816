//! Finite extensions `G` of a Mal'cev-presented normal subgroup `H`, and the
//! reduction of one equation in `G` to finitely many twisted equations in `H`.
//!
//! An element `(h, τ)` stands for `h t_τ`, where `t_0 = 1, .., t_{f-1}` is a
//! transversal of `H`. Conjugation is `ψ_τ(h) = t_τ h t_τ^{-1}`, so
//! `t_τ h = ψ_τ(h) t_τ`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equation::dsl::{self, Item};
use crate::equation::{EquationError, EquationWord, Occurrence};
use crate::json_int::{from_json_vec, to_json_vec, JsonInt};
use crate::malcev::{Automorphism, AutomorphismFile, MalcevError, MalcevPresentation, NormalForm, PresentationFile};
use crate::pipeline::{solve_equation, GroupVerdict};
use crate::solver::{Certificate, SolverConfig, Stats};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error(transparent)]
    Base(#[from] MalcevError),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error("inconsistent extension tables: {0}")]
    Table(String),
    #[error("malformed extension document: {0}")]
    Json(String),
}

/// `h t_τ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GElement {
    pub h: NormalForm,
    pub tau: usize,
}

#[derive(Clone, Debug)]
pub struct ExtensionPresentation {
    base: MalcevPresentation,
    /// `base` with `ψ_1, .., ψ_{f-1}` registered as `conj_<name>`, used for
    /// the twisted equations.
    twisted: MalcevPresentation,
    psi: Vec<Automorphism>,
    /// Registry index of `ψ_τ` in `twisted`; `None` for `τ = 0`.
    psi_index: Vec<Option<usize>>,
    mult: Vec<Vec<(NormalForm, usize)>>,
    inv: Vec<(NormalForm, usize)>,
    names: Vec<String>,
}

/// Trials of the randomized associativity check.
const VALIDATION_TRIALS: usize = 200;

impl ExtensionPresentation {
    /// `psi[τ]` realizes conjugation by `t_τ`, `mult[τ][σ] = (h, ρ)` means
    /// `t_τ t_σ = h t_ρ` and `inv[τ] = (h, ρ)` means `t_τ^{-1} = h t_ρ`.
    /// Transversal names default to `t0, .., t{f-1}`.
    pub fn new(
        base: MalcevPresentation,
        psi: Vec<Automorphism>,
        mult: Vec<Vec<(NormalForm, usize)>>,
        inv: Vec<(NormalForm, usize)>,
        names: Option<Vec<String>>,
    ) -> Result<Self, ExtensionError> {
        let f = psi.len();
        let names = names.unwrap_or_else(|| (0..f).map(|i| format!("t{i}")).collect());
        let table = |msg: String| Err(ExtensionError::Table(msg));
        if f == 0 {
            return table("the transversal is empty".into());
        }
        if names.len() != f || mult.len() != f || inv.len() != f || mult.iter().any(|r| r.len() != f) {
            return table(format!("every table must have {f} entries per transversal index"));
        }
        for name in &names {
            if !dsl::is_symbol_name(name) || base.generator_index(name).is_some() {
                return table(format!("transversal name {name:?} is not a fresh lowercase symbol"));
            }
        }
        let mut twisted = base.clone();
        let mut psi_index = vec![None];
        for (tau, aut) in psi.iter().enumerate() {
            aut.validate(&base)?;
            if tau == 0 {
                if !aut.is_identity(&base) {
                    return table("psi_0 must be the identity".into());
                }
                continue;
            }
            psi_index.push(Some(twisted.add_automorphism(format!("conj_{}", names[tau]), aut.clone())?));
        }
        let ext = ExtensionPresentation {
            base,
            twisted,
            psi,
            psi_index,
            mult,
            inv,
            names,
        };
        ext.check_tables()?;
        Ok(ext)
    }

    fn check_tables(&self) -> Result<(), ExtensionError> {
        let p = &self.base;
        let f = self.f();
        let bad = |msg: String| Err(ExtensionError::Table(msg));
        for row in &self.mult {
            for (h, rho) in row {
                if *rho >= f || h.to_vec().len() != p.generator_count() {
                    return bad("multiplication table entry out of range".into());
                }
            }
        }
        for tau in 0..f {
            let one = NormalForm::identity(p);
            if self.mult[0][tau] != (one.clone(), tau) || self.mult[tau][0] != (one, tau) {
                return bad(format!("t0 must be the identity (row/column {tau})"));
            }
            let (h, rho) = &self.inv[tau];
            if *rho >= f {
                return bad("inverse table entry out of range".into());
            }
            let t = self.transversal(tau);
            let prod = self.g_multiply(&t, &GElement { h: h.clone(), tau: *rho });
            if prod != self.identity() {
                return bad(format!("inverse table entry for {} is wrong", self.names[tau]));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let random = |rng: &mut ChaCha8Rng| GElement {
            h: NormalForm::random(p, rng, 4),
            tau: rng.gen_range(0..f),
        };
        for _ in 0..VALIDATION_TRIALS {
            let (x, y, z) = (random(&mut rng), random(&mut rng), random(&mut rng));
            let left = self.g_multiply(&self.g_multiply(&x, &y), &z);
            let right = self.g_multiply(&x, &self.g_multiply(&y, &z));
            if left != right {
                return bad(format!(
                    "multiplication is not associative on cosets ({}, {}, {})",
                    self.names[x.tau], self.names[y.tau], self.names[z.tau]
                ));
            }
            let xi = self.g_invert(&x);
            if self.g_multiply(&x, &xi) != self.identity() || self.g_multiply(&xi, &x) != self.identity() {
                return bad("inverse table does not produce two-sided inverses".into());
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &MalcevPresentation {
        &self.base
    }

    /// The base group with the conjugation automorphisms registered.
    pub fn twisted_base(&self) -> &MalcevPresentation {
        &self.twisted
    }

    pub fn f(&self) -> usize {
        self.psi.len()
    }

    pub fn psi(&self, tau: usize) -> &Automorphism {
        &self.psi[tau]
    }

    pub fn transversal_names(&self) -> &[String] {
        &self.names
    }

    /// Index of a transversal element by its name, or by the generic token
    /// `t<τ>` which is always accepted.
    pub fn transversal_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name).or_else(|| {
            let tau: usize = name.strip_prefix('t')?.parse().ok()?;
            (tau < self.f() && name == format!("t{tau}")).then_some(tau)
        })
    }

    pub fn mult_entry(&self, tau: usize, sigma: usize) -> &(NormalForm, usize) {
        &self.mult[tau][sigma]
    }

    pub fn inv_entry(&self, tau: usize) -> &(NormalForm, usize) {
        &self.inv[tau]
    }

    pub fn identity(&self) -> GElement {
        GElement {
            h: NormalForm::identity(&self.base),
            tau: 0,
        }
    }

    pub fn transversal(&self, tau: usize) -> GElement {
        GElement {
            h: NormalForm::identity(&self.base),
            tau,
        }
    }

    pub fn from_h(&self, h: NormalForm) -> GElement {
        GElement { h, tau: 0 }
    }

    /// `h1 t1 h2 t2 = h1 ψ_{t1}(h2) h t3` where `t1 t2 = h t3`.
    pub fn g_multiply(&self, x: &GElement, y: &GElement) -> GElement {
        let p = &self.base;
        let (hc, tau) = &self.mult[x.tau][y.tau];
        let moved = self.psi[x.tau].apply(p, &y.h);
        GElement {
            h: p.product([&x.h, &moved, hc]),
            tau: *tau,
        }
    }

    /// `(h t)^{-1} = t^{-1} h^{-1} = hi ψ_{t'}(h^{-1}) t'` where
    /// `t^{-1} = hi t'`.
    pub fn g_invert(&self, x: &GElement) -> GElement {
        let p = &self.base;
        let (hi, tau) = &self.inv[x.tau];
        let moved = self.psi[*tau].apply(p, &p.invert(&x.h));
        GElement {
            h: p.multiply(hi, &moved),
            tau: *tau,
        }
    }

    pub fn g_power(&self, x: &GElement, e: i64) -> GElement {
        let base = if e < 0 { self.g_invert(x) } else { x.clone() };
        (0..e.unsigned_abs()).fold(self.identity(), |acc, _| self.g_multiply(&acc, &base))
    }

    /// Renders `h t_τ` in the equation language, e.g. `a^2 s`.
    pub fn render(&self, x: &GElement) -> String {
        let h = x.h.to_word(&self.base);
        match (x.h.is_identity(), x.tau) {
            (_, 0) => h,
            (true, t) => self.names[t].clone(),
            (false, t) => format!("{h} {}", self.names[t]),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ExtensionError> {
        let file: ExtensionFile =
            serde_json::from_str(text).map_err(|e| ExtensionError::Json(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &ExtensionFile) -> Result<Self, ExtensionError> {
        let base = MalcevPresentation::from_file(&file.base)?;
        if file.psi.len() != file.f {
            return Err(ExtensionError::Json(format!("expected {} psi entries", file.f)));
        }
        let psi = file
            .psi
            .iter()
            .map(|a| Automorphism::from_file(&base, a))
            .collect::<Result<Vec<_>, _>>()?;
        let element = |v: &[JsonInt]| NormalForm::from_vec(&base, &from_json_vec(v));
        let one = NormalForm::identity(&base);
        let mut mult = vec![vec![(one.clone(), usize::MAX); file.f]; file.f];
        for (tau, sigma, h, rho) in &file.mult_table {
            if *tau >= file.f || *sigma >= file.f {
                return Err(ExtensionError::Json("mult_table index out of range".into()));
            }
            mult[*tau][*sigma] = (element(h)?, *rho);
        }
        let mut inv = vec![(one, usize::MAX); file.f];
        for (tau, h, rho) in &file.inv_table {
            if *tau >= file.f {
                return Err(ExtensionError::Json("inv_table index out of range".into()));
            }
            inv[*tau] = (element(h)?, *rho);
        }
        if mult.iter().flatten().any(|e| e.1 == usize::MAX) || inv.iter().any(|e| e.1 == usize::MAX) {
            return Err(ExtensionError::Json("mult_table and inv_table must be complete".into()));
        }
        Self::new(base, psi, mult, inv, file.transversal_names.clone())
    }

    pub fn to_file(&self) -> ExtensionFile {
        let f = self.f();
        let mut mult_table = Vec::with_capacity(f * f);
        for (tau, row) in self.mult.iter().enumerate() {
            for (sigma, (h, rho)) in row.iter().enumerate() {
                mult_table.push((tau, sigma, to_json_vec(&h.to_vec()), *rho));
            }
        }
        ExtensionFile {
            base: self.base.to_file(),
            f,
            psi: self.psi.iter().map(Automorphism::to_file).collect(),
            mult_table,
            inv_table: self
                .inv
                .iter()
                .enumerate()
                .map(|(tau, (h, rho))| (tau, to_json_vec(&h.to_vec()), *rho))
                .collect(),
            transversal_names: Some(self.names.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("extensions serialize")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionFile {
    pub base: PresentationFile,
    pub f: usize,
    pub psi: Vec<AutomorphismFile>,
    pub mult_table: Vec<(usize, usize, Vec<JsonInt>, usize)>,
    pub inv_table: Vec<(usize, Vec<JsonInt>, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transversal_names: Option<Vec<String>>,
}

/// `c_0 X_{i_1}^{ε_1} c_1 ⋯ X_{i_K}^{ε_K} c_K = 1` over `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GEquationWord {
    variables: Vec<String>,
    constants: Vec<GElement>,
    /// `(variable ordinal, ε)`.
    occurrences: Vec<(usize, i8)>,
}

impl GEquationWord {
    pub fn new(
        variables: Vec<String>,
        constants: Vec<GElement>,
        occurrences: Vec<(usize, i8)>,
    ) -> Result<Self, EquationError> {
        if constants.len() != occurrences.len() + 1 {
            return Err(EquationError::Malformed(format!(
                "{} occurrences need {} constants, got {}",
                occurrences.len(),
                occurrences.len() + 1,
                constants.len()
            )));
        }
        if occurrences
            .iter()
            .any(|&(v, e)| v >= variables.len() || (e != 1 && e != -1))
        {
            return Err(EquationError::Malformed("occurrence out of range".into()));
        }
        Ok(GEquationWord {
            variables,
            constants,
            occurrences,
        })
    }

    /// Parses the equation language with base generators and transversal
    /// names as constants. Twisted occurrences are not allowed here.
    pub fn parse(text: &str, ext: &ExtensionPresentation) -> Result<Self, EquationError> {
        let mut variables: Vec<String> = Vec::new();
        let mut constants = Vec::new();
        let mut occurrences = Vec::new();
        let mut current = ext.identity();
        for pi in dsl::tokenize(text)? {
            match pi.item {
                Item::One => {}
                Item::Symbol { name, exp } => {
                    let factor = if let Some(g) = ext.base.generator_index(&name) {
                        let h = ext.base.evaluate_word(&[(g, exp)]).expect("index in range");
                        ext.from_h(h)
                    } else if let Some(tau) = ext.transversal_index(&name) {
                        let e = i64::try_from(&exp).map_err(|_| EquationError::MalformedExponent {
                            token: name.clone(),
                            pos: pi.pos,
                        })?;
                        ext.g_power(&ext.transversal(tau), e)
                    } else {
                        return Err(EquationError::UnknownSymbol {
                            token: name,
                            pos: pi.pos,
                        });
                    };
                    current = ext.g_multiply(&current, &factor);
                }
                Item::Var { name, power, twist } => {
                    if let Some(t) = twist {
                        return Err(EquationError::UnknownAutomorphism { name: t, pos: pi.pos });
                    }
                    let var = match variables.iter().position(|v| *v == name) {
                        Some(i) => i,
                        None => {
                            variables.push(name);
                            variables.len() - 1
                        }
                    };
                    let eps = if power < 0 { -1 } else { 1 };
                    for _ in 0..power.abs() {
                        constants.push(std::mem::replace(&mut current, ext.identity()));
                        occurrences.push((var, eps));
                    }
                }
            }
        }
        constants.push(current);
        Ok(GEquationWord {
            variables,
            constants,
            occurrences,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constants(&self) -> &[GElement] {
        &self.constants
    }

    pub fn occurrences(&self) -> &[(usize, i8)] {
        &self.occurrences
    }

    pub fn evaluate(&self, ext: &ExtensionPresentation, values: &[GElement]) -> Result<GElement, EquationError> {
        if values.len() < self.variables.len() {
            return Err(EquationError::UnassignedVariable(self.variables[values.len()].clone()));
        }
        let mut acc = self.constants[0].clone();
        for (&(v, eps), c) in self.occurrences.iter().zip(&self.constants[1..]) {
            let x = if eps < 0 {
                ext.g_invert(&values[v])
            } else {
                values[v].clone()
            };
            acc = ext.g_multiply(&acc, &x);
            acc = ext.g_multiply(&acc, c);
        }
        Ok(acc)
    }

    pub fn display<'a>(&'a self, ext: &'a ExtensionPresentation) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a GEquationWord, &'a ExtensionPresentation);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
                let (eq, ext) = (self.0, self.1);
                let mut parts = Vec::new();
                let push = |c: &GElement, parts: &mut Vec<String>| {
                    if *c != ext.identity() {
                        parts.push(ext.render(c));
                    }
                };
                push(&eq.constants[0], &mut parts);
                for (&(v, eps), c) in eq.occurrences.iter().zip(&eq.constants[1..]) {
                    let name = &eq.variables[v];
                    parts.push(if eps < 0 { format!("{name}^-1") } else { name.clone() });
                    push(c, &mut parts);
                }
                if parts.is_empty() {
                    parts.push("1".into());
                }
                write!(f, "{} = 1", parts.join(" "))
            }
        }
        Show(self, ext)
    }
}

/// Transversal index reached after reading the word with `X_j = Y_j t_{z_j}`.
fn final_coset(ext: &ExtensionPresentation, eq: &GEquationWord, z: &[usize]) -> usize {
    let mut tau = ext.mult[0][eq.constants[0].tau].1;
    for (&(v, eps), c) in eq.occurrences.iter().zip(&eq.constants[1..]) {
        let zt = if eps < 0 { ext.inv[z[v]].1 } else { z[v] };
        tau = ext.mult[tau][zt].1;
        tau = ext.mult[tau][c.tau].1;
    }
    tau
}

/// All tuples `z` (one transversal index per variable, lexicographic order)
/// for which the transversal part of the word lands in `H`.
pub fn enumerate_transversal_assignments(ext: &ExtensionPresentation, eq: &GEquationWord) -> Vec<Vec<usize>> {
    let n = eq.variables.len();
    let f = ext.f();
    let mut out = Vec::new();
    let mut z = vec![0; n];
    loop {
        if final_coset(ext, eq, &z) == 0 {
            out.push(z.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            z[i] += 1;
            if z[i] < f {
                break;
            }
            z[i] = 0;
        }
    }
}

/// The twisted equation over `H` whose solutions `y` are exactly those with
/// `X_j = y_j t_{z_j}` solving `eq`. Requires `z` to be in the assignment set.
///
/// Reading left to right keeps a prefix `P t_τ`; a constant `h t_σ` becomes
/// `ψ_τ(h) h_c` with `t_τ t_σ = h_c t_{τ'}`, an occurrence `X` becomes
/// `ψ_τ(Y) h_c`, and `X^{-1} = hi t_{z'} Y^{-1}` becomes
/// `ψ_τ(hi) h_c ψ_{τ'}(Y)^{-1}`.
pub fn build_twisted_equations(
    ext: &ExtensionPresentation,
    eq: &GEquationWord,
    z: &[usize],
) -> Result<EquationWord, ExtensionError> {
    let p = &ext.base;
    let mut constants = Vec::with_capacity(eq.constants.len());
    let mut occurrences = Vec::with_capacity(eq.occurrences.len());
    let mut current = NormalForm::identity(p);
    let mut tau = 0;
    // prefix · ψ_τ(h) · cocycle, moving to coset τ'
    let absorb = |current: &mut NormalForm, tau: &mut usize, h: &NormalForm, sigma: usize| {
        let (hc, next) = &ext.mult[*tau][sigma];
        let moved = ext.psi[*tau].apply(p, h);
        *current = p.product([&*current, &moved, hc]);
        *tau = *next;
    };
    absorb(&mut current, &mut tau, &eq.constants[0].h, eq.constants[0].tau);
    for (&(v, eps), c) in eq.occurrences.iter().zip(&eq.constants[1..]) {
        if eps > 0 {
            let twist = ext.psi_index[tau];
            constants.push(std::mem::replace(&mut current, NormalForm::identity(p)));
            occurrences.push(Occurrence { var: v, epsilon: 1, twist });
            let (hc, next) = &ext.mult[tau][z[v]];
            current = hc.clone();
            tau = *next;
        } else {
            let (hi, zi) = &ext.inv[z[v]];
            absorb(&mut current, &mut tau, hi, *zi);
            constants.push(std::mem::replace(&mut current, NormalForm::identity(p)));
            occurrences.push(Occurrence {
                var: v,
                epsilon: -1,
                twist: ext.psi_index[tau],
            });
        }
        absorb(&mut current, &mut tau, &c.h, c.tau);
    }
    if tau != 0 {
        return Err(ExtensionError::Table(format!(
            "assignment {z:?} leaves the word in coset {}",
            ext.names[tau]
        )));
    }
    constants.push(current);
    Ok(EquationWord::new(&ext.twisted, eq.variables.clone(), constants, occurrences)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionVerdict {
    Sat(Vec<(String, GElement)>),
    Unsat(Certificate),
    Unknown(String),
}

impl ExtensionVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            ExtensionVerdict::Sat(_) => "sat",
            ExtensionVerdict::Unsat(_) => "unsat",
            ExtensionVerdict::Unknown(_) => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSolution {
    pub verdict: ExtensionVerdict,
    /// Assignments tried, with the twisted equation and its verdict tag.
    pub branches: Vec<(Vec<usize>, String, &'static str)>,
    pub stats: Stats,
}

/// Decides `eq = 1` in `G` by deciding every twisted equation. The SAT
/// witness is `X_j = y_j t_{z_j}` and is re-checked in `G`.
pub fn solve_in_extension(
    ext: &ExtensionPresentation,
    eq: &GEquationWord,
    cfg: &SolverConfig,
) -> Result<ExtensionSolution, ExtensionError> {
    let mut stats = Stats::default();
    let mut branches = Vec::new();
    let mut certificates = Vec::new();
    let mut unknown = None;
    for z in enumerate_transversal_assignments(ext, eq) {
        let twisted = build_twisted_equations(ext, eq, &z)?;
        let sol = solve_equation(&twisted, &ext.twisted, cfg);
        stats.branches += sol.stats.branches;
        stats.nodes += sol.stats.nodes;
        stats.millis += sol.stats.millis;
        branches.push((z.clone(), twisted.display(&ext.twisted).to_string(), sol.verdict.tag()));
        match sol.verdict {
            GroupVerdict::Sat(ys) => {
                let values: Vec<GElement> = ys
                    .into_iter()
                    .zip(&z)
                    .map(|((_, y), &t)| GElement { h: y, tau: t })
                    .collect();
                if eq.evaluate(ext, &values)? != ext.identity() {
                    unknown.get_or_insert_with(|| "witness failed verification in G".to_string());
                    continue;
                }
                return Ok(ExtensionSolution {
                    verdict: ExtensionVerdict::Sat(eq.variables.iter().cloned().zip(values).collect()),
                    branches,
                    stats,
                });
            }
            GroupVerdict::Unsat(c) => certificates.push(c),
            GroupVerdict::Unknown(r) => {
                unknown.get_or_insert(r);
            }
        }
    }
    let verdict = match (unknown, certificates.first()) {
        (Some(r), _) => ExtensionVerdict::Unknown(r),
        (None, Some(first)) if certificates.iter().all(|c| c == first) => ExtensionVerdict::Unsat(first.clone()),
        _ => ExtensionVerdict::Unsat(Certificate::BranchExhaustedComplete),
    };
    Ok(ExtensionSolution {
        verdict,
        branches,
        stats,
    })
}

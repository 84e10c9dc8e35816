use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::automorphism::{Automorphism, AutomorphismFile};
use super::{MalcevError, NormalForm};
use crate::json_int::{from_json_vec, to_json_vec, JsonInt};

/// Which family a generator index belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// `a_i`, infinite order modulo the commutator subgroup.
    A(usize),
    /// `b_i`, torsion of order `l_i` modulo the commutator subgroup.
    B(usize),
    /// The infinite central generator `c` (also written `d_0`).
    C,
    /// `d_i`, central of order `k_i`.
    D(usize),
}

/// A class-2 nilpotent group with virtually cyclic commutator subgroup, given
/// by a Mal'cev generating set and its structure constants.
///
/// Generators are indexed `0..n` for the `a`s, `n..n+r` for the `b`s,
/// `n+r` for `c` and `n+r+1..n+r+1+t` for the `d`s. Central exponent vectors
/// have `t + 1` entries, entry 0 being the exponent of `c`.
#[derive(Clone, Debug)]
pub struct MalcevPresentation {
    n: usize,
    r: usize,
    t: usize,
    l: Vec<BigInt>,
    k: Vec<BigInt>,
    alpha: BTreeMap<(usize, usize), Vec<BigInt>>,
    beta: BTreeMap<(usize, usize), Vec<BigInt>>,
    gamma: BTreeMap<(usize, usize), Vec<BigInt>>,
    eta: Vec<Vec<BigInt>>,
    names: Vec<String>,
    automorphisms: Vec<(String, Automorphism)>,
    /// `swap[x][y]` for `x < y` over the `n + r` non-central generators is the
    /// central element `z` with `g_y g_x = g_x g_y z`.
    swap: Vec<Vec<Vec<BigInt>>>,
}

impl PartialEq for MalcevPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.r == other.r
            && self.t == other.t
            && self.l == other.l
            && self.k == other.k
            && self.alpha == other.alpha
            && self.beta == other.beta
            && self.gamma == other.gamma
            && self.eta == other.eta
            && self.names == other.names
            && self.automorphisms == other.automorphisms
    }
}

impl MalcevPresentation {
    pub fn builder(n: usize, r: usize, t: usize) -> PresentationBuilder {
        PresentationBuilder::new(n, r, t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of non-central generators, `n + r`.
    pub fn noncentral_len(&self) -> usize {
        self.n + self.r
    }

    /// Total number of Mal'cev generators, `n + r + 1 + t`.
    pub fn generator_count(&self) -> usize {
        self.n + self.r + 1 + self.t
    }

    pub fn l(&self) -> &[BigInt] {
        &self.l
    }

    pub fn k(&self) -> &[BigInt] {
        &self.k
    }

    pub fn eta(&self, i: usize) -> &[BigInt] {
        &self.eta[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self, g: usize) -> GenKind {
        if g < self.n {
            GenKind::A(g)
        } else if g < self.n + self.r {
            GenKind::B(g - self.n)
        } else if g == self.n + self.r {
            GenKind::C
        } else {
            GenKind::D(g - self.n - self.r - 1)
        }
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    /// Central element `z` with `g_y g_x = g_x g_y z`, for non-central `x < y`.
    pub fn swap_cost(&self, x: usize, y: usize) -> &[BigInt] {
        &self.swap[x][y]
    }

    /// Modulus of central coordinate `m` (`None` for `c`).
    pub fn central_modulus(&self, m: usize) -> Option<&BigInt> {
        if m == 0 {
            None
        } else {
            Some(&self.k[m - 1])
        }
    }

    pub fn reduce_central(&self, central: &mut [BigInt]) {
        for (m, z) in central.iter_mut().enumerate().skip(1) {
            *z = z.mod_floor(&self.k[m - 1]);
        }
    }

    pub fn automorphisms(&self) -> &[(String, Automorphism)] {
        &self.automorphisms
    }

    pub fn automorphism(&self, name: &str) -> Option<(usize, &Automorphism)> {
        self.automorphisms
            .iter()
            .enumerate()
            .find(|(_, (n, _))| n == name)
            .map(|(i, (_, a))| (i, a))
    }

    pub fn automorphism_at(&self, index: usize) -> &Automorphism {
        &self.automorphisms[index].1
    }

    pub fn automorphism_name(&self, index: usize) -> &str {
        &self.automorphisms[index].0
    }

    /// Registers a named automorphism after checking it against this group.
    pub fn add_automorphism(
        &mut self,
        name: impl Into<String>,
        aut: Automorphism,
    ) -> Result<usize, MalcevError> {
        let name = name.into();
        aut.validate(self)?;
        if let Some(slot) = self.automorphisms.iter_mut().find(|(n, _)| *n == name) {
            slot.1 = aut;
        } else {
            self.automorphisms.push((name.clone(), aut));
        }
        Ok(self
            .automorphisms
            .iter()
            .position(|(n, _)| *n == name)
            .expect("just inserted"))
    }

    /// Checks bounds and runs the randomized associativity and inverse checks.
    pub fn validate(&self, trials: usize, seed: u64) -> Result<(), MalcevError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let u = NormalForm::random(self, &mut rng, 5);
            let v = NormalForm::random(self, &mut rng, 5);
            let w = NormalForm::random(self, &mut rng, 5);
            let left = self.multiply(&self.multiply(&u, &v), &w);
            let right = self.multiply(&u, &self.multiply(&v, &w));
            if left != right {
                return Err(MalcevError::AssociativityFailure {
                    u: u.to_vec(),
                    v: v.to_vec(),
                    w: w.to_vec(),
                });
            }
            let inv = self.invert(&u);
            if !self.multiply(&u, &inv).is_identity() || !self.multiply(&inv, &u).is_identity()
            {
                return Err(MalcevError::InverseFailure { u: u.to_vec() });
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, MalcevError> {
        let file: PresentationFile =
            serde_json::from_str(text).map_err(|e| MalcevError::Json(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &PresentationFile) -> Result<Self, MalcevError> {
        let mut b = PresentationBuilder::new(file.n, file.r, file.t)
            .torsion(from_json_vec(&file.l))
            .orders(from_json_vec(&file.k));
        for e in &file.alpha {
            let (i, j, m, v) = four(e, "alpha")?;
            b = b.alpha(i, j, m, v);
        }
        for e in &file.beta {
            let (i, j, m, v) = four(e, "beta")?;
            b = b.beta(i, j, m, v);
        }
        for e in &file.gamma {
            let (i, j, m, v) = four(e, "gamma")?;
            b = b.gamma(i, j, m, v);
        }
        for e in &file.eta {
            if e.len() != 3 {
                return Err(MalcevError::Json("eta entries are [i, m, value]".into()));
            }
            let i = index_of(&e[0], "eta")?;
            let m = index_of(&e[1], "eta")?;
            b = b.eta(i, m, e[2].0.clone());
        }
        if let Some(names) = &file.names {
            b = b.names(names.clone());
        }
        let mut p = b.build()?;
        for (name, aut) in &file.automorphisms {
            let aut = Automorphism::from_file(&p, aut)?;
            p.add_automorphism(name.clone(), aut)?;
        }
        Ok(p)
    }

    pub fn to_file(&self) -> PresentationFile {
        let table = |m: &BTreeMap<(usize, usize), Vec<BigInt>>| {
            let mut out = Vec::new();
            for ((i, j), vals) in m {
                for (mm, v) in vals.iter().enumerate() {
                    if !v.is_zero() {
                        out.push(vec![
                            JsonInt::from((*i + 1) as i64),
                            JsonInt::from((*j + 1) as i64),
                            JsonInt::from(mm as i64),
                            JsonInt::from(v),
                        ]);
                    }
                }
            }
            out
        };
        let mut eta = Vec::new();
        for (i, vals) in self.eta.iter().enumerate() {
            for (m, v) in vals.iter().enumerate() {
                if !v.is_zero() {
                    eta.push(vec![
                        JsonInt::from((i + 1) as i64),
                        JsonInt::from(m as i64),
                        JsonInt::from(v),
                    ]);
                }
            }
        }
        PresentationFile {
            n: self.n,
            r: self.r,
            t: self.t,
            l: to_json_vec(&self.l),
            k: to_json_vec(&self.k),
            alpha: table(&self.alpha),
            beta: table(&self.beta),
            gamma: table(&self.gamma),
            eta,
            names: Some(self.names.clone()),
            automorphisms: self
                .automorphisms
                .iter()
                .map(|(n, a)| (n.clone(), a.to_file()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("presentation serializes")
    }
}

fn index_of(v: &JsonInt, table: &str) -> Result<usize, MalcevError> {
    usize::try_from(&v.0).map_err(|_| MalcevError::Json(format!("{table}: bad index {}", v.0)))
}

fn four(e: &[JsonInt], table: &str) -> Result<(usize, usize, usize, BigInt), MalcevError> {
    if e.len() != 4 {
        return Err(MalcevError::Json(format!(
            "{table} entries are [i, j, m, value]"
        )));
    }
    Ok((
        index_of(&e[0], table)?,
        index_of(&e[1], table)?,
        index_of(&e[2], table)?,
        e[3].0.clone(),
    ))
}

/// On-disk form of a presentation. Generator indices `i`, `j` are 1-based as
/// in the usual notation; the central index `m` runs over `0..=t` with `0`
/// standing for `c`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationFile {
    pub n: usize,
    pub r: usize,
    pub t: usize,
    #[serde(default)]
    pub l: Vec<JsonInt>,
    #[serde(default)]
    pub k: Vec<JsonInt>,
    #[serde(default)]
    pub alpha: Vec<Vec<JsonInt>>,
    #[serde(default)]
    pub beta: Vec<Vec<JsonInt>>,
    #[serde(default)]
    pub gamma: Vec<Vec<JsonInt>>,
    #[serde(default)]
    pub eta: Vec<Vec<JsonInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default)]
    pub automorphisms: BTreeMap<String, AutomorphismFile>,
}

/// Incremental construction of a [`MalcevPresentation`]. Indices passed to
/// `alpha`/`beta`/`gamma`/`eta` are 1-based for generators; `m` is `0` for `c`
/// and `1..=t` for the `d`s.
#[derive(Clone, Debug)]
pub struct PresentationBuilder {
    n: usize,
    r: usize,
    t: usize,
    l: Vec<BigInt>,
    k: Vec<BigInt>,
    alpha: Vec<(usize, usize, usize, BigInt)>,
    beta: Vec<(usize, usize, usize, BigInt)>,
    gamma: Vec<(usize, usize, usize, BigInt)>,
    eta: Vec<(usize, usize, BigInt)>,
    names: Option<Vec<String>>,
}

impl PresentationBuilder {
    fn new(n: usize, r: usize, t: usize) -> Self {
        PresentationBuilder {
            n,
            r,
            t,
            l: vec![BigInt::one(); r],
            k: vec![BigInt::one(); t],
            alpha: Vec::new(),
            beta: Vec::new(),
            gamma: Vec::new(),
            eta: Vec::new(),
            names: None,
        }
    }

    pub fn torsion(mut self, l: Vec<BigInt>) -> Self {
        self.l = l;
        self
    }

    pub fn orders(mut self, k: Vec<BigInt>) -> Self {
        self.k = k;
        self
    }

    /// `[a_j, a_i]` has `value` as its `m`-th central exponent (`i < j`).
    pub fn alpha(mut self, i: usize, j: usize, m: usize, value: impl Into<BigInt>) -> Self {
        self.alpha.push((i, j, m, value.into()));
        self
    }

    /// `[b_j, b_i]` has `value` as its `m`-th central exponent (`i < j`).
    pub fn beta(mut self, i: usize, j: usize, m: usize, value: impl Into<BigInt>) -> Self {
        self.beta.push((i, j, m, value.into()));
        self
    }

    /// `[a_i, b_j]` has `value` as its `m`-th central exponent.
    pub fn gamma(mut self, i: usize, j: usize, m: usize, value: impl Into<BigInt>) -> Self {
        self.gamma.push((i, j, m, value.into()));
        self
    }

    /// `b_i^{l_i}` has `value` as its `m`-th central exponent.
    pub fn eta(mut self, i: usize, m: usize, value: impl Into<BigInt>) -> Self {
        self.eta.push((i, m, value.into()));
        self
    }

    pub fn names(mut self, names: Vec<String>) -> Self {
        self.names = Some(names);
        self
    }

    pub fn build(self) -> Result<MalcevPresentation, MalcevError> {
        let PresentationBuilder {
            n,
            r,
            t,
            l,
            k,
            alpha,
            beta,
            gamma,
            eta,
            names,
        } = self;
        if l.len() != r {
            return Err(MalcevError::IndexOutOfRange(format!(
                "l has {} entries, expected r = {r}",
                l.len()
            )));
        }
        if k.len() != t {
            return Err(MalcevError::IndexOutOfRange(format!(
                "k has {} entries, expected t = {t}",
                k.len()
            )));
        }
        for (i, v) in l.iter().enumerate() {
            if !v.is_positive() {
                return Err(MalcevError::NonPositiveOrder(format!("l_{} = {v}", i + 1)));
            }
        }
        for (i, v) in k.iter().enumerate() {
            if !v.is_positive() {
                return Err(MalcevError::NonPositiveOrder(format!("k_{} = {v}", i + 1)));
            }
        }
        let reduce = |m: usize, v: BigInt| -> BigInt {
            if m == 0 {
                v
            } else {
                v.mod_floor(&k[m - 1])
            }
        };
        let zero_central = || vec![BigInt::zero(); t + 1];
        let check_m = |table: &str, m: usize| -> Result<(), MalcevError> {
            if m > t {
                Err(MalcevError::IndexOutOfRange(format!(
                    "{table}: central index {m} exceeds t = {t}"
                )))
            } else {
                Ok(())
            }
        };

        let mut alpha_map: BTreeMap<(usize, usize), Vec<BigInt>> = BTreeMap::new();
        for (i, j, m, v) in alpha {
            if !(1 <= i && i < j && j <= n) {
                return Err(MalcevError::IndexOutOfRange(format!(
                    "alpha: need 1 <= i < j <= n, got ({i}, {j})"
                )));
            }
            check_m("alpha", m)?;
            alpha_map.entry((i - 1, j - 1)).or_insert_with(zero_central)[m] = reduce(m, v);
        }
        let mut beta_map: BTreeMap<(usize, usize), Vec<BigInt>> = BTreeMap::new();
        for (i, j, m, v) in beta {
            if !(1 <= i && i < j && j <= r) {
                return Err(MalcevError::IndexOutOfRange(format!(
                    "beta: need 1 <= i < j <= r, got ({i}, {j})"
                )));
            }
            check_m("beta", m)?;
            beta_map.entry((i - 1, j - 1)).or_insert_with(zero_central)[m] = reduce(m, v);
        }
        let mut gamma_map: BTreeMap<(usize, usize), Vec<BigInt>> = BTreeMap::new();
        for (i, j, m, v) in gamma {
            if !(1 <= i && i <= n && 1 <= j && j <= r) {
                return Err(MalcevError::IndexOutOfRange(format!(
                    "gamma: need 1 <= i <= n, 1 <= j <= r, got ({i}, {j})"
                )));
            }
            check_m("gamma", m)?;
            gamma_map.entry((i - 1, j - 1)).or_insert_with(zero_central)[m] = reduce(m, v);
        }
        let mut eta_rows = vec![zero_central(); r];
        for (i, m, v) in eta {
            if !(1 <= i && i <= r) {
                return Err(MalcevError::IndexOutOfRange(format!(
                    "eta: need 1 <= i <= r, got {i}"
                )));
            }
            check_m("eta", m)?;
            eta_rows[i - 1][m] = reduce(m, v);
        }

        let names = match names {
            Some(names) => {
                if names.len() != n + r + 1 + t {
                    return Err(MalcevError::IndexOutOfRange(format!(
                        "names has {} entries, expected {}",
                        names.len(),
                        n + r + 1 + t
                    )));
                }
                for (i, a) in names.iter().enumerate() {
                    if !is_generator_name(a) {
                        return Err(MalcevError::IndexOutOfRange(format!(
                            "generator name {a:?} must start with a lowercase letter"
                        )));
                    }
                    if names[..i].contains(a) {
                        return Err(MalcevError::IndexOutOfRange(format!(
                            "duplicate generator name {a:?}"
                        )));
                    }
                }
                names
            }
            None => default_names(n, r, t),
        };

        let g = n + r;
        let mut swap = vec![vec![zero_central(); g]; g];
        for x in 0..g {
            for y in (x + 1)..g {
                swap[x][y] = if y < n {
                    alpha_map.get(&(x, y)).cloned().unwrap_or_else(zero_central)
                } else if x >= n {
                    beta_map
                        .get(&(x - n, y - n))
                        .cloned()
                        .unwrap_or_else(zero_central)
                } else {
                    // g_y = b_j, g_x = a_i: [b_j, a_i] = [a_i, b_j]^{-1}
                    let mut z = gamma_map
                        .get(&(x, y - n))
                        .cloned()
                        .unwrap_or_else(zero_central);
                    for (m, v) in z.iter_mut().enumerate() {
                        *v = reduce(m, -v.clone());
                    }
                    z
                };
            }
        }

        Ok(MalcevPresentation {
            n,
            r,
            t,
            l,
            k,
            alpha: alpha_map,
            beta: beta_map,
            gamma: gamma_map,
            eta: eta_rows,
            names,
            automorphisms: Vec::new(),
            swap,
        })
    }
}

pub(crate) fn is_generator_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `a1..an, b1..br, c, d1..dt`, with a bare letter when a family has one member.
pub fn default_names(n: usize, r: usize, t: usize) -> Vec<String> {
    let family = |letter: &str, count: usize| -> Vec<String> {
        if count == 1 {
            vec![letter.to_string()]
        } else {
            (1..=count).map(|i| format!("{letter}{i}")).collect()
        }
    };
    let mut out = family("a", n);
    out.extend(family("b", r));
    out.push("c".to_string());
    out.extend(family("d", t));
    out
}

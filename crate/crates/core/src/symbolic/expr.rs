//! Integer affine forms and quadratic expressions with affine floor terms.
//!
//! Variables are indices into a registry owned by the caller; an assignment
//! is a slice indexed by variable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SymbolicError;

/// `constant + Σ coeffs[v]·v`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineForm {
    constant: BigInt,
    coeffs: BTreeMap<usize, BigInt>,
}

impl AffineForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        AffineForm {
            constant: c.into(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(v: usize) -> Self {
        Self::term(v, BigInt::one())
    }

    pub fn term(v: usize, c: impl Into<BigInt>) -> Self {
        let mut f = Self::zero();
        f.add_term(v, &c.into());
        f
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, BigInt> {
        &self.coeffs
    }

    pub fn coeff(&self, v: usize) -> BigInt {
        self.coeffs.get(&v).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn add_const(&mut self, c: &BigInt) {
        self.constant += c;
    }

    pub fn add_term(&mut self, v: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(v).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    /// `self += k · other`.
    pub fn add_scaled(&mut self, other: &AffineForm, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        self.constant += &other.constant * k;
        for (v, c) in &other.coeffs {
            self.add_term(*v, &(c * k));
        }
    }

    pub fn scaled(&self, k: &BigInt) -> AffineForm {
        let mut out = AffineForm::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn negated(&self) -> AffineForm {
        self.scaled(&-BigInt::one())
    }

    pub fn plus(&self, other: &AffineForm) -> AffineForm {
        let mut out = self.clone();
        out.add_scaled(other, &BigInt::one());
        out
    }

    pub fn minus(&self, other: &AffineForm) -> AffineForm {
        let mut out = self.clone();
        out.add_scaled(other, &-BigInt::one());
        out
    }

    /// The product as a quadratic expression.
    pub fn mul(&self, other: &AffineForm) -> QuadExpr {
        let mut q = QuadExpr::zero();
        q.add_affine_product(self, other, &BigInt::one());
        q
    }

    /// gcd of the variable coefficients (0 for a constant form).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Replaces `v` by `by`.
    pub fn substitute(&self, v: usize, by: &AffineForm) -> AffineForm {
        match self.coeffs.get(&v) {
            None => self.clone(),
            Some(c) => {
                let c = c.clone();
                let mut out = self.clone();
                out.coeffs.remove(&v);
                out.add_scaled(by, &c);
                out
            }
        }
    }

    /// Reduces every coefficient and the constant into `[0, m)`.
    pub fn reduced_mod(&self, m: &BigInt) -> AffineForm {
        let mut out = AffineForm::constant(self.constant.mod_floor(m));
        for (v, c) in &self.coeffs {
            out.add_term(*v, &c.mod_floor(m));
        }
        out
    }

    pub fn eval(&self, sigma: &[BigInt]) -> Result<BigInt, SymbolicError> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            let x = sigma.get(*v).ok_or(SymbolicError::UnassignedVariable(*v))?;
            acc += c * x;
        }
        Ok(acc)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Render {
            quad: None,
            affine: self,
            floors: None,
            names,
        }
    }
}

/// `⌊numerator / denominator⌋` with an affine numerator and a positive
/// denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FloorTerm {
    pub numerator: AffineForm,
    pub denominator: BigInt,
}

impl FloorTerm {
    pub fn new(numerator: AffineForm, denominator: BigInt) -> Self {
        assert!(denominator.is_positive(), "floor denominator must be positive");
        FloorTerm {
            numerator,
            denominator,
        }
    }

    pub fn eval(&self, sigma: &[BigInt]) -> Result<BigInt, SymbolicError> {
        Ok(self.numerator.eval(sigma)?.div_floor(&self.denominator))
    }
}

/// `Σ quad[(i,j)]·v_i·v_j + affine + Σ floors[f]·f`, keys `(i, j)` with
/// `i <= j`. Floor terms are keyed by their (numerator, denominator), so equal
/// floors are merged.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadExpr {
    quad: BTreeMap<(usize, usize), BigInt>,
    affine: AffineForm,
    floors: BTreeMap<FloorTerm, BigInt>,
}

impl From<AffineForm> for QuadExpr {
    fn from(affine: AffineForm) -> Self {
        QuadExpr {
            affine,
            ..Default::default()
        }
    }
}

impl QuadExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        AffineForm::constant(c).into()
    }

    pub fn quad(&self) -> &BTreeMap<(usize, usize), BigInt> {
        &self.quad
    }

    pub fn affine(&self) -> &AffineForm {
        &self.affine
    }

    pub fn floors(&self) -> &BTreeMap<FloorTerm, BigInt> {
        &self.floors
    }

    pub fn is_zero(&self) -> bool {
        self.quad.is_empty() && self.affine.is_zero() && self.floors.is_empty()
    }

    /// No quadratic monomials and no floors.
    pub fn is_affine(&self) -> bool {
        self.quad.is_empty() && self.floors.is_empty()
    }

    pub fn has_floors(&self) -> bool {
        !self.floors.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = self.affine.variables().collect();
        for (i, j) in self.quad.keys() {
            out.insert(*i);
            out.insert(*j);
        }
        for f in self.floors.keys() {
            out.extend(f.numerator.variables());
        }
        out
    }

    /// Variables occurring in a quadratic monomial or a floor numerator.
    pub fn nonlinear_variables(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for (i, j) in self.quad.keys() {
            out.insert(*i);
            out.insert(*j);
        }
        for f in self.floors.keys() {
            out.extend(f.numerator.variables());
        }
        out
    }

    pub fn add_quad(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let key = if i <= j { (i, j) } else { (j, i) };
        let e = self.quad.entry(key).or_default();
        *e += c;
        if e.is_zero() {
            self.quad.remove(&key);
        }
    }

    pub fn add_floor(&mut self, coeff: &BigInt, f: FloorTerm) {
        if coeff.is_zero() {
            return;
        }
        let e = self.floors.entry(f.clone()).or_default();
        *e += coeff;
        if e.is_zero() {
            self.floors.remove(&f);
        }
    }

    pub fn affine_mut(&mut self) -> &mut AffineForm {
        &mut self.affine
    }

    /// `self += k · x · y`.
    pub fn add_affine_product(&mut self, x: &AffineForm, y: &AffineForm, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        self.affine.add_scaled(y, &(&x.constant * k));
        for (v, c) in &x.coeffs {
            let ck = c * k;
            self.affine.add_term(*v, &(&ck * &y.constant));
            for (w, d) in &y.coeffs {
                self.add_quad(*v, *w, &(&ck * d));
            }
        }
    }

    /// `self += k · other`.
    pub fn add_scaled(&mut self, other: &QuadExpr, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for ((i, j), c) in &other.quad {
            self.add_quad(*i, *j, &(c * k));
        }
        self.affine.add_scaled(&other.affine, k);
        for (f, c) in &other.floors {
            self.add_floor(&(c * k), f.clone());
        }
    }

    pub fn scaled(&self, k: &BigInt) -> QuadExpr {
        let mut out = QuadExpr::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn plus(&self, other: &QuadExpr) -> QuadExpr {
        let mut out = self.clone();
        out.add_scaled(other, &BigInt::one());
        out
    }

    /// Reduces every integer coefficient (not floor numerators) into `[0, m)`.
    pub fn reduced_mod(&self, m: &BigInt) -> QuadExpr {
        let mut out = QuadExpr::zero();
        for ((i, j), c) in &self.quad {
            out.add_quad(*i, *j, &c.mod_floor(m));
        }
        out.affine = self.affine.reduced_mod(m);
        for (f, c) in &self.floors {
            out.add_floor(&c.mod_floor(m), f.clone());
        }
        out
    }

    /// Replaces `v` by `by` everywhere, floor numerators included.
    pub fn substitute(&self, v: usize, by: &AffineForm) -> QuadExpr {
        let mut out = QuadExpr::zero();
        for ((i, j), c) in &self.quad {
            let fi = if *i == v { by.clone() } else { AffineForm::var(*i) };
            let fj = if *j == v { by.clone() } else { AffineForm::var(*j) };
            out.add_affine_product(&fi, &fj, c);
        }
        out.affine.add_scaled(&self.affine.substitute(v, by), &BigInt::one());
        for (f, c) in &self.floors {
            let num = f.numerator.substitute(v, by);
            if num.is_constant() {
                out.affine
                    .add_const(&(c * num.constant.div_floor(&f.denominator)));
            } else {
                out.add_floor(c, FloorTerm::new(num, f.denominator.clone()));
            }
        }
        out
    }

    /// Replaces every floor term by `replace(floor)`, an affine form.
    pub fn map_floors(&self, mut replace: impl FnMut(&FloorTerm) -> AffineForm) -> QuadExpr {
        let mut out = QuadExpr {
            quad: self.quad.clone(),
            affine: self.affine.clone(),
            floors: BTreeMap::new(),
        };
        for (f, c) in &self.floors {
            out.affine.add_scaled(&replace(f), c);
        }
        out
    }

    pub fn eval(&self, sigma: &[BigInt]) -> Result<BigInt, SymbolicError> {
        let mut acc = self.affine.eval(sigma)?;
        for ((i, j), c) in &self.quad {
            let x = sigma.get(*i).ok_or(SymbolicError::UnassignedVariable(*i))?;
            let y = sigma.get(*j).ok_or(SymbolicError::UnassignedVariable(*j))?;
            acc += c * x * y;
        }
        for (f, c) in &self.floors {
            acc += c * f.eval(sigma)?;
        }
        Ok(acc)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Render {
            quad: Some(&self.quad),
            affine: &self.affine,
            floors: Some(&self.floors),
            names,
        }
    }
}

struct Render<'a> {
    quad: Option<&'a BTreeMap<(usize, usize), BigInt>>,
    affine: &'a AffineForm,
    floors: Option<&'a BTreeMap<FloorTerm, BigInt>>,
    names: &'a [String],
}

impl Render<'_> {
    fn name(&self, v: usize) -> String {
        self.names
            .get(v)
            .cloned()
            .unwrap_or_else(|| format!("v{v}"))
    }
}

/// Pushes `coeff·body` onto `terms` as `(negative, text)`.
fn push_term(terms: &mut Vec<(bool, String)>, coeff: &BigInt, body: &str) {
    let neg = coeff.is_negative();
    let mag = coeff.abs();
    let text = if body.is_empty() {
        mag.to_string()
    } else if mag.is_one() {
        body.to_string()
    } else {
        format!("{mag}{body}")
    };
    terms.push((neg, text));
}

impl fmt::Display for Render<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if let Some(quad) = self.quad {
            for ((i, j), c) in quad {
                let body = if i == j {
                    format!("{}^2", self.name(*i))
                } else {
                    format!("{}{}", self.name(*i), self.name(*j))
                };
                push_term(&mut terms, c, &body);
            }
        }
        for (v, c) in &self.affine.coeffs {
            push_term(&mut terms, c, &self.name(*v));
        }
        if let Some(floors) = self.floors {
            for (fl, c) in floors {
                let inner = Render {
                    quad: None,
                    affine: &fl.numerator,
                    floors: None,
                    names: self.names,
                };
                push_term(&mut terms, c, &format!("⌊({inner})/{}⌋", fl.denominator));
            }
        }
        if !self.affine.constant.is_zero() {
            push_term(&mut terms, &self.affine.constant, "");
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (neg, text)) in terms.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{text}")?,
                (0, false) => write!(f, "{text}")?,
                (_, true) => write!(f, " - {text}")?,
                (_, false) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::expr::{AffineForm, FloorTerm, QuadExpr};
use crate::equation::EquationWord;
use crate::malcev::{Automorphism, MalcevPresentation, NormalForm};

/// A group element with symbolic exponents, written as the word
/// `a^A b^B z` where the `b` exponents are not yet reduced.
///
/// Central exponents are `central[m] / denom`; the denominator is 1 or 2 and
/// only appears through `binom(V, 2)` when raising a fixed element to a
/// variable power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicElement {
    pub a: Vec<AffineForm>,
    pub b: Vec<AffineForm>,
    pub central: Vec<QuadExpr>,
    pub denom: BigInt,
}

/// Result of collecting a whole equation: `a` exponents exact, `b` and `d`
/// exponents meaningful modulo `l` and `k`, central exponents divided by
/// `denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicNormalForm {
    pub a: Vec<AffineForm>,
    pub b: Vec<AffineForm>,
    pub l: Vec<BigInt>,
    pub central: Vec<QuadExpr>,
    pub k: Vec<BigInt>,
    pub denom: BigInt,
}

impl SymbolicElement {
    pub fn identity(p: &MalcevPresentation) -> Self {
        SymbolicElement {
            a: vec![AffineForm::zero(); p.n()],
            b: vec![AffineForm::zero(); p.r()],
            central: vec![QuadExpr::zero(); p.t() + 1],
            denom: BigInt::one(),
        }
    }

    pub fn constant(p: &MalcevPresentation, u: &NormalForm) -> Self {
        SymbolicElement {
            a: u.a().iter().cloned().map(AffineForm::constant).collect(),
            b: u.b().iter().cloned().map(AffineForm::constant).collect(),
            central: u.central().iter().cloned().map(QuadExpr::constant).collect(),
            denom: BigInt::one(),
        }
        .checked(p)
    }

    /// The generic element `a^{V_a} b^{V_b} c^{V_c} d^{V_d}` whose exponents
    /// are the variables `vars` in generator order.
    pub fn block(p: &MalcevPresentation, vars: &[usize]) -> Self {
        assert_eq!(vars.len(), p.generator_count());
        let (n, r) = (p.n(), p.r());
        SymbolicElement {
            a: vars[..n].iter().map(|&v| AffineForm::var(v)).collect(),
            b: vars[n..n + r].iter().map(|&v| AffineForm::var(v)).collect(),
            central: vars[n + r..]
                .iter()
                .map(|&v| QuadExpr::from(AffineForm::var(v)))
                .collect(),
            denom: BigInt::one(),
        }
    }

    fn checked(self, p: &MalcevPresentation) -> Self {
        debug_assert_eq!(self.a.len(), p.n());
        debug_assert_eq!(self.b.len(), p.r());
        debug_assert_eq!(self.central.len(), p.t() + 1);
        self
    }

    fn exponents(&self) -> impl Iterator<Item = &AffineForm> {
        self.a.iter().chain(self.b.iter())
    }

    fn rescale(&mut self, denom: &BigInt) {
        if *denom != self.denom {
            let k = denom / &self.denom;
            for z in &mut self.central {
                *z = z.scaled(&k);
            }
            self.denom = denom.clone();
        }
    }

    /// `self · other`: exponents add and every `g_y^e` of `self` that
    /// `g_x^f` of `other` passes (`x < y`) costs `swap(x, y)^{e f}`.
    pub fn multiply(&self, p: &MalcevPresentation, other: &SymbolicElement) -> SymbolicElement {
        let denom = self.denom.lcm(&other.denom);
        let mut out = self.clone();
        out.rescale(&denom);
        let mut rhs = other.clone();
        rhs.rescale(&denom);
        let e: Vec<&AffineForm> = self.exponents().collect();
        let f: Vec<&AffineForm> = other.exponents().collect();
        for y in 0..e.len() {
            if e[y].is_zero() {
                continue;
            }
            for x in 0..y {
                if f[x].is_zero() {
                    continue;
                }
                for (m, z) in p.swap_cost(x, y).iter().enumerate() {
                    if !z.is_zero() {
                        out.central[m].add_affine_product(e[y], f[x], &(z * &denom));
                    }
                }
            }
        }
        for (s, o) in out.a.iter_mut().zip(&rhs.a) {
            *s = s.plus(o);
        }
        for (s, o) in out.b.iter_mut().zip(&rhs.b) {
            *s = s.plus(o);
        }
        for (s, o) in out.central.iter_mut().zip(&rhs.central) {
            *s = s.plus(o);
        }
        out
    }

    /// `(e, z)^{-1} = (-e, -z + C(e, e))` where `C(e, e)` is the cost of
    /// collecting `a^e · a^e`.
    pub fn invert(&self, p: &MalcevPresentation) -> SymbolicElement {
        let cost = self_cost(p, &self.exponents().cloned().collect::<Vec<_>>(), &self.denom);
        SymbolicElement {
            a: self.a.iter().map(AffineForm::negated).collect(),
            b: self.b.iter().map(AffineForm::negated).collect(),
            central: self
                .central
                .iter()
                .zip(cost)
                .map(|(z, c)| z.scaled(&-BigInt::one()).plus(&c))
                .collect(),
            denom: self.denom.clone(),
        }
    }

    /// `u^V` for a fixed element `u = (e, z)` and the variable `v`:
    /// `(V e, V z + binom(V, 2) C(e, e))`.
    pub fn power_of(p: &MalcevPresentation, u: &NormalForm, v: usize) -> SymbolicElement {
        let e: Vec<BigInt> = u.a().iter().chain(u.b()).cloned().collect();
        let mut cost = vec![BigInt::zero(); p.t() + 1];
        for y in 0..e.len() {
            for x in 0..y {
                let ef = &e[y] * &e[x];
                if ef.is_zero() {
                    continue;
                }
                for (m, z) in p.swap_cost(x, y).iter().enumerate() {
                    cost[m] += z * &ef;
                }
            }
        }
        let two = BigInt::from(2);
        let denom = if cost.iter().all(|c| c.is_even()) {
            BigInt::one()
        } else {
            two.clone()
        };
        let var = AffineForm::var(v);
        let central = u
            .central()
            .iter()
            .zip(&cost)
            .map(|(z, c)| {
                // denom · (V z + (V^2 - V)/2 · c)
                let mut q = QuadExpr::from(var.scaled(&(z * &denom)));
                let half = &(c * &denom) / &two;
                q.add_quad(v, v, &half);
                q.affine_mut().add_term(v, &-half);
                q
            })
            .collect();
        SymbolicElement {
            a: u.a().iter().map(|x| var.scaled(x)).collect(),
            b: u.b().iter().map(|x| var.scaled(x)).collect(),
            central,
            denom,
        }
    }

    /// Collects into a symbolic normal form. Each `b_i` exponent `E` is split
    /// as `E = E' + l_i M` with the coefficients of `E'` in `[0, l_i)`, so
    /// `b_i^E = b_i^{E' mod l_i} · η_i^{M + ⌊E'/l_i⌋}`.
    pub fn finish(&self, p: &MalcevPresentation) -> SymbolicNormalForm {
        let mut central = self.central.clone();
        let mut b = Vec::with_capacity(p.r());
        for (i, e) in self.b.iter().enumerate() {
            let l = &p.l()[i];
            let reduced = e.reduced_mod(l);
            let mut carry = e.minus(&reduced);
            // `carry` is divisible by `l` coefficientwise.
            carry = divide_exact(&carry, l);
            let mut quotient = QuadExpr::from(carry);
            if !reduced.is_constant() {
                quotient.add_floor(&BigInt::one(), FloorTerm::new(reduced.clone(), l.clone()));
            }
            for (m, eta) in p.eta(i).iter().enumerate() {
                if !eta.is_zero() {
                    central[m].add_scaled(&quotient, &(eta * &self.denom));
                }
            }
            b.push(reduced);
        }
        for (m, z) in central.iter_mut().enumerate().skip(1) {
            *z = z.reduced_mod(&(&p.k()[m - 1] * &self.denom));
        }
        SymbolicNormalForm {
            a: self.a.clone(),
            b,
            l: p.l().to_vec(),
            central,
            k: p.k().to_vec(),
            denom: self.denom.clone(),
        }
    }
}

fn divide_exact(f: &AffineForm, l: &BigInt) -> AffineForm {
    let mut out = AffineForm::constant(f.constant_term() / l);
    for (v, c) in f.coeffs() {
        out.add_term(*v, &(c / l));
    }
    out
}

/// `denom · C(e, e)` with `C(e, f) = Σ_{x<y} swap(x, y) e_y f_x`.
fn self_cost(p: &MalcevPresentation, e: &[AffineForm], denom: &BigInt) -> Vec<QuadExpr> {
    let mut cost = vec![QuadExpr::zero(); p.t() + 1];
    for y in 0..e.len() {
        if e[y].is_zero() {
            continue;
        }
        for x in 0..y {
            if e[x].is_zero() {
                continue;
            }
            for (m, z) in p.swap_cost(x, y).iter().enumerate() {
                if !z.is_zero() {
                    cost[m].add_affine_product(&e[y], &e[x], &(z * denom));
                }
            }
        }
    }
    cost
}

/// Image of the generic element on `vars` under `theta`: the product of
/// `theta(g)^{V_g}` over the generators in order.
pub fn apply_automorphism_symbolic(
    p: &MalcevPresentation,
    theta: &Automorphism,
    vars: &[usize],
) -> SymbolicElement {
    let mut acc = SymbolicElement::identity(p);
    for (g, &v) in vars.iter().enumerate() {
        let factor = SymbolicElement::power_of(p, &theta.images()[g], v);
        acc = acc.multiply(p, &factor);
    }
    acc
}

impl SymbolicNormalForm {
    /// Concrete exponents at `sigma`, in the layout of a normal-form vector.
    pub fn eval(&self, sigma: &[BigInt]) -> Result<Vec<BigInt>, super::SymbolicError> {
        let mut out = Vec::new();
        for f in &self.a {
            out.push(f.eval(sigma)?);
        }
        for (f, l) in self.b.iter().zip(&self.l) {
            out.push(f.eval(sigma)?.mod_floor(l));
        }
        for (m, z) in self.central.iter().enumerate() {
            let v = z.eval(sigma)?;
            let (q, rem) = v.div_mod_floor(&self.denom);
            assert!(rem.is_zero(), "central exponent must be integral");
            out.push(if m == 0 { q } else { q.mod_floor(&self.k[m - 1]) });
        }
        Ok(out)
    }
}

/// The registry of integer variables created for an equation, one block of
/// `n + r + 1 + t` per group variable, named `X_1, .., X_{n+r+1+t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub variables: Vec<String>,
    pub blocks: Vec<Vec<usize>>,
    pub normal_form: SymbolicNormalForm,
}

/// Collects `eq` with every variable replaced by its generic block.
pub fn symbolic_collect(eq: &EquationWord, p: &MalcevPresentation) -> Reduction {
    let width = p.generator_count();
    let mut variables = Vec::new();
    let mut blocks = Vec::new();
    for name in eq.variables() {
        let block: Vec<usize> = (0..width)
            .map(|g| {
                variables.push(format!("{name}_{}", g + 1));
                variables.len() - 1
            })
            .collect();
        blocks.push(block);
    }
    let mut acc = SymbolicElement::constant(p, &eq.constants()[0]);
    for (o, w) in eq.occurrences().iter().zip(&eq.constants()[1..]) {
        let block = &blocks[o.var];
        let mut x = match o.twist {
            None => SymbolicElement::block(p, block),
            Some(t) => apply_automorphism_symbolic(p, p.automorphism_at(t), block),
        };
        if o.epsilon < 0 {
            x = x.invert(p);
        }
        acc = acc.multiply(p, &x);
        if !w.is_identity() {
            acc = acc.multiply(p, &SymbolicElement::constant(p, w));
        }
    }
    Reduction {
        variables,
        blocks,
        normal_form: acc.finish(p),
    }
}

impl Reduction {
    /// The group element for each equation variable at `sigma`.
    pub fn witness(&self, p: &MalcevPresentation, sigma: &[BigInt]) -> Vec<NormalForm> {
        self.blocks
            .iter()
            .map(|block| {
                let exps: Vec<BigInt> = block.iter().map(|&v| sigma[v].clone()).collect();
                NormalForm::from_word_exponents(p, &exps).expect("block has full width")
            })
            .collect()
    }
}

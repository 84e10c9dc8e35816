//! Exhaustive enumeration of integer points on a definite quadric.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::budget::{Budget, Exhausted};
use crate::symbolic::QuadExpr;

type Q = BigRational;

/// `λᵀAλ + bᵀλ + c` over the variables `vars`, with rational `A`.
struct Quadric {
    a: Vec<Vec<Q>>,
    b: Vec<Q>,
    c: Q,
}

fn quadric(q: &QuadExpr, vars: &[usize]) -> Quadric {
    let k = vars.len();
    let idx = |v: usize| vars.binary_search(&v).expect("variable listed");
    let mut a = vec![vec![Q::zero(); k]; k];
    let half = Q::new(BigInt::one(), BigInt::from(2));
    for ((i, j), c) in q.quad() {
        let (i, j) = (idx(*i), idx(*j));
        let c = Q::from_integer(c.clone());
        if i == j {
            a[i][i] += c;
        } else {
            let h = &c * &half;
            a[i][j] += &h;
            a[j][i] += h;
        }
    }
    let mut b = vec![Q::zero(); k];
    for (v, c) in q.affine().coeffs() {
        b[idx(*v)] = Q::from_integer(c.clone());
    }
    Quadric {
        a,
        b,
        c: Q::from_integer(q.affine().constant_term().clone()),
    }
}

/// Upper-triangular Fincke–Pohst form: `xᵀAx = Σ_i r[i][i] (x_i + Σ_{j>i}
/// r[i][j] x_j)²`. `None` unless `A` is positive definite.
fn decompose(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let k = a.len();
    let mut r = a.to_vec();
    for i in 0..k {
        if !r[i][i].is_positive() {
            return None;
        }
        for j in i + 1..k {
            r[j][i] = r[i][j].clone();
            r[i][j] = &r[i][j] / &r[i][i];
        }
        for l in i + 1..k {
            for j in l..k {
                let t = &r[l][i] * &r[i][j];
                r[l][j] -= t;
            }
        }
    }
    Some(r)
}

/// `Some(sign)` when the quadratic part of `q` over `vars` is definite, with
/// `sign = 1` for positive and `-1` for negative definite.
pub(crate) fn definite_sign(q: &QuadExpr, vars: &[usize]) -> Option<i8> {
    if vars.is_empty() {
        return None;
    }
    let quad = quadric(q, vars);
    if decompose(&quad.a).is_some() {
        return Some(1);
    }
    let neg: Vec<Vec<Q>> = quad.a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    decompose(&neg).map(|_| -1)
}

/// Solves `A μ = rhs` for positive definite `A`.
fn solve_spd(a: &[Vec<Q>], rhs: &[Q]) -> Vec<Q> {
    let k = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(r.clone());
            row
        })
        .collect();
    for i in 0..k {
        let p = (i..k).find(|&r| !m[r][i].is_zero()).expect("nonsingular");
        m.swap(i, p);
        let pivot = m[i][i].clone();
        for x in m[i].iter_mut() {
            *x = &*x / &pivot;
        }
        for r in 0..k {
            if r != i && !m[r][i].is_zero() {
                let f = m[r][i].clone();
                for j in i..=k {
                    let t = &f * &m[i][j];
                    m[r][j] -= t;
                }
            }
        }
    }
    m.into_iter().map(|row| row[k].clone()).collect()
}

/// Visits every integer point of `q = 0` (definite over `vars`) until
/// `visit` returns `true`. Returns whether it did.
pub(crate) fn enumerate_definite(
    q: &QuadExpr,
    vars: &[usize],
    nvars: usize,
    budget: &Budget,
    visit: &mut dyn FnMut(&[BigInt]) -> Result<bool, Exhausted>,
) -> Result<bool, Exhausted> {
    let sign = definite_sign(q, vars).expect("definite quadric");
    let q = if sign < 0 {
        q.scaled(&-BigInt::one())
    } else {
        q.clone()
    };
    let quad = quadric(&q, vars);
    let r = decompose(&quad.a).expect("positive definite");
    // q(λ) = (λ-μ)ᵀA(λ-μ) + c - μᵀAμ with μ = -A⁻¹b/2
    let rhs: Vec<Q> = quad.b.iter().map(|x| -x / Q::from_integer(2.into())).collect();
    let mu = solve_spd(&quad.a, &rhs);
    let mut mu_a_mu = Q::zero();
    for i in 0..vars.len() {
        for j in 0..vars.len() {
            mu_a_mu += &mu[i] * &quad.a[i][j] * &mu[j];
        }
    }
    let radius = mu_a_mu - &quad.c;
    if radius.is_negative() {
        return Ok(false);
    }
    let mut point = vec![BigInt::zero(); nvars];
    let mut lambda = vec![BigInt::zero(); vars.len()];
    let mut ctx = Ctx {
        q: &q,
        vars,
        r: &r,
        mu: &mu,
        budget,
        visit,
    };
    ctx.descend(vars.len(), &radius, &mut lambda, &mut point)
}

struct Ctx<'a> {
    q: &'a QuadExpr,
    vars: &'a [usize],
    r: &'a [Vec<Q>],
    mu: &'a [Q],
    budget: &'a Budget,
    visit: &'a mut dyn FnMut(&[BigInt]) -> Result<bool, Exhausted>,
}

impl Ctx<'_> {
    /// Coordinates `level..` of `lambda` are fixed; choose `level - 1`.
    fn descend(
        &mut self,
        level: usize,
        rem: &Q,
        lambda: &mut Vec<BigInt>,
        point: &mut Vec<BigInt>,
    ) -> Result<bool, Exhausted> {
        self.budget.tick()?;
        if level == 0 {
            for (i, &v) in self.vars.iter().enumerate() {
                point[v] = lambda[i].clone();
            }
            let value = self.q.eval(point).expect("all variables assigned");
            if value.is_zero() {
                return (self.visit)(point);
            }
            return Ok(false);
        }
        let i = level - 1;
        let mut shift = Q::zero();
        for j in level..self.vars.len() {
            shift += &self.r[i][j] * (Q::from_integer(lambda[j].clone()) - &self.mu[j]);
        }
        let center = &self.mu[i] - shift;
        let d = &self.r[i][i];
        let start = center.floor().to_integer();
        // walk up from ⌊center⌋, then down from ⌊center⌋ - 1
        for dir in [1i32, -1] {
            let mut x = if dir > 0 { start.clone() } else { &start - 1 };
            loop {
                let t = Q::from_integer(x.clone()) - &center;
                let used = d * &t * &t;
                if &used > rem {
                    // ⌊center⌋ may fall outside while ⌊center⌋ + 1 does not
                    if dir > 0 && t.is_negative() {
                        x += dir;
                        continue;
                    }
                    break;
                }
                lambda[i] = x.clone();
                if self.descend(i, &(rem - used), lambda, point)? {
                    return Ok(true);
                }
                x += dir;
            }
        }
        Ok(false)
    }
}

/// Integer roots of `a x² + b x + c` (not all coefficients zero).
pub(crate) fn integer_roots(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<BigInt> {
    if a.is_zero() {
        if b.is_zero() {
            return Vec::new();
        }
        let (q, r) = (-c).div_rem(b);
        return if r.is_zero() { vec![q] } else { Vec::new() };
    }
    let disc = b * b - BigInt::from(4) * a * c;
    let Some(s) = super::numtheory::exact_sqrt(&disc) else {
        return Vec::new();
    };
    let two_a = a * 2;
    let mut out = Vec::new();
    for num in [-b + &s, -b - &s] {
        let (q, r) = num.div_rem(&two_a);
        if r.is_zero() && !out.contains(&q) {
            out.push(q);
        }
    }
    out.sort();
    out
}

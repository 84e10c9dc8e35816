//! Brute-force ground truth for equations in a Mal'cev group or a finite
//! extension of one. Only group evaluation is used, never the symbolic
//! reduction.
//!
//! A variable value `u z` (or `u z t_τ` in an extension) is split into its
//! non-central part `u = a^.. b^..` and its central part `z = c^.. d^..`.
//! Central elements commute with `H`, so substituting `u z` changes the word
//! by a central factor that is linear in `z`: the non-central parts are
//! enumerated by evaluation and the central parts by vector arithmetic.
//!
//! Assignments are scanned in lexicographic order of the non-central parts
//! of all variables (and their cosets), followed by the central parts.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::extension::{ExtensionPresentation, GElement, GEquationWord};
use crate::equation::EquationWord;
use crate::malcev::{Automorphism, MalcevPresentation, NormalForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome<T> {
    /// Values for the equation's variables, in order.
    Found(Vec<T>),
    /// No solution in the box of the given bound.
    NotFound(u64),
}

impl<T> OracleOutcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, OracleOutcome::Found(_))
    }
}

/// Every tuple of `lo[i]..=hi[i]` in lexicographic order.
fn integer_box(ranges: &[(BigInt, BigInt)]) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return out;
    }
    let mut x: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
    loop {
        out.push(x.clone());
        let mut i = ranges.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if x[i] < ranges[i].1 {
                x[i] += 1;
                break;
            }
            x[i] = ranges[i].0.clone();
        }
    }
}

/// Non-central parts `a^.. b^..` with `a` exponents in `[-bound, bound]`
/// and `b` exponents over their residues.
pub fn noncentral_box(p: &MalcevPresentation, bound: u64) -> Vec<NormalForm> {
    let bound = BigInt::from(bound);
    let mut ranges = vec![(-bound.clone(), bound.clone()); p.n()];
    ranges.extend(p.l().iter().map(|l| (BigInt::zero(), l - 1)));
    ranges.extend(std::iter::repeat((BigInt::zero(), BigInt::zero())).take(p.t() + 1));
    integer_box(&ranges)
        .into_iter()
        .map(|v| NormalForm::from_vec(p, &v).expect("box lies in normal-form range"))
        .collect()
}

/// Central parts `[c, d_1, ..]` with `c` in `[-bound, bound]` and the `d`
/// exponents over their residues.
pub fn central_box(p: &MalcevPresentation, bound: u64) -> Vec<Vec<BigInt>> {
    let bound = BigInt::from(bound);
    let mut ranges = vec![(-bound.clone(), bound)];
    ranges.extend(p.k().iter().map(|k| (BigInt::zero(), k - 1)));
    integer_box(&ranges)
}

/// Every normal form in the box, ordered by non-central part, then central.
pub fn element_box(p: &MalcevPresentation, bound: u64) -> Vec<NormalForm> {
    let zs = central_box(p, bound);
    let mut out = Vec::new();
    for u in noncentral_box(p, bound) {
        for z in &zs {
            out.push(with_central(p, &u, z));
        }
    }
    out
}

fn with_central(p: &MalcevPresentation, u: &NormalForm, z: &[BigInt]) -> NormalForm {
    let mut v = u.to_vec();
    let g_len = p.noncentral_len();
    v[g_len..].clone_from_slice(z);
    NormalForm::from_vec(p, &v).expect("box lies in normal-form range")
}

/// Calls `visit` on every tuple of `[0, sizes[i])` in lexicographic order
/// until it returns true. Returns whether it did.
fn odometer(sizes: &[usize], mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if sizes.iter().any(|&s| s == 0) {
        return false;
    }
    let mut x = vec![0usize; sizes.len()];
    loop {
        if visit(&x) {
            return true;
        }
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if x[i] + 1 < sizes[i] {
                x[i] += 1;
                break;
            }
            x[i] = 0;
        }
    }
}

/// `cols[v][m]` is the central vector contributed by one unit of the `m`-th
/// central exponent of variable `v`. Finds the first `z` tuple with
/// `target + Σ cols · z ≡ 0`.
fn solve_central(
    p: &MalcevPresentation,
    target: &[BigInt],
    cols: &[Vec<Vec<BigInt>>],
    zbox: &[Vec<BigInt>],
) -> Option<Vec<usize>> {
    let sizes = vec![zbox.len(); cols.len()];
    let mut found = None;
    odometer(&sizes, |idx| {
        let mut sum = target.to_vec();
        for (v, &zi) in idx.iter().enumerate() {
            for (m, e) in zbox[zi].iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                for (s, c) in sum.iter_mut().zip(&cols[v][m]) {
                    *s += c * e;
                }
            }
        }
        p.reduce_central(&mut sum);
        if sum.iter().all(Zero::is_zero) {
            found = Some(idx.to_vec());
            true
        } else {
            false
        }
    });
    found
}

/// `ε · θ(g_m)` for every central generator `g_m`, added into `cols`.
fn add_central_images(p: &MalcevPresentation, theta: Option<&Automorphism>, eps: i8, cols: &mut [Vec<BigInt>]) {
    let g_len = p.noncentral_len();
    for (m, col) in cols.iter_mut().enumerate() {
        let image = match theta {
            Some(t) => t.images()[g_len + m].central().to_vec(),
            None => NormalForm::generator(p, g_len + m).central().to_vec(),
        };
        for (c, x) in col.iter_mut().zip(image) {
            *c += x * i64::from(eps);
        }
    }
}

fn zero_cols(p: &MalcevPresentation, nvars: usize) -> Vec<Vec<Vec<BigInt>>> {
    vec![vec![vec![BigInt::zero(); p.t() + 1]; p.t() + 1]; nvars]
}

/// First solution of `eq` over `p` with `a` and `c` exponents in
/// `[-bound, bound]` and `b`, `d` exponents over their residues.
pub fn brute_force(eq: &EquationWord, p: &MalcevPresentation, bound: u64) -> OracleOutcome<NormalForm> {
    let nvars = eq.variables().len();
    let us = noncentral_box(p, bound);
    let zbox = central_box(p, bound);
    // The central contribution of each variable does not depend on `u`.
    let mut cols = zero_cols(p, nvars);
    for o in eq.occurrences() {
        let theta = o.twist.map(|t| p.automorphism_at(t));
        add_central_images(p, theta, o.epsilon, &mut cols[o.var]);
    }
    let mut found = None;
    odometer(&vec![us.len(); nvars], |idx| {
        let values: Vec<NormalForm> = idx.iter().map(|&i| us[i].clone()).collect();
        let w = eq.evaluate(p, &values).expect("one value per variable");
        if !w.is_central() {
            return false;
        }
        match solve_central(p, w.central(), &cols, &zbox) {
            Some(zi) => {
                found = Some(
                    values
                        .iter()
                        .zip(zi)
                        .map(|(u, z)| with_central(p, u, &zbox[z]))
                        .collect(),
                );
                true
            }
            None => false,
        }
    });
    match found {
        Some(v) => OracleOutcome::Found(v),
        None => OracleOutcome::NotFound(bound),
    }
}

/// First solution of `eq` in the extension: base exponents as in
/// [`brute_force`], every transversal index.
///
/// For `X = u z t_τ` with `z` central in `H`, the factor `z` moves to the
/// front of the word as `ψ_κ(z)`, where `κ` is the coset of the prefix
/// preceding it; `X^{-1} = t_τ^{-1} z^{-1} u^{-1}` likewise with the prefix
/// ending in `t_τ^{-1}`.
pub fn brute_force_extension(
    eq: &GEquationWord,
    ext: &ExtensionPresentation,
    bound: u64,
) -> OracleOutcome<GElement> {
    let p = ext.base();
    let f = ext.f();
    let nvars = eq.variables().len();
    let us = noncentral_box(p, bound);
    let zbox = central_box(p, bound);
    let coset = |x: usize, y: usize| ext.mult_entry(x, y).1;
    let mut found = None;
    odometer(&vec![us.len() * f; nvars], |idx| {
        let values: Vec<GElement> = idx
            .iter()
            .map(|&i| GElement {
                h: us[i / f].clone(),
                tau: i % f,
            })
            .collect();
        let w = eq.evaluate(ext, &values).expect("one value per variable");
        if w.tau != 0 || !w.h.is_central() {
            return false;
        }
        let mut cols = zero_cols(p, nvars);
        let mut cur = eq.constants()[0].tau;
        for (&(v, eps), c) in eq.occurrences().iter().zip(&eq.constants()[1..]) {
            let tau = values[v].tau;
            let kappa = if eps > 0 {
                let k = cur;
                cur = coset(cur, tau);
                k
            } else {
                cur = coset(cur, ext.inv_entry(tau).1);
                cur
            };
            add_central_images(p, Some(ext.psi(kappa)), eps, &mut cols[v]);
            cur = coset(cur, c.tau);
        }
        match solve_central(p, w.h.central(), &cols, &zbox) {
            Some(zi) => {
                found = Some(
                    values
                        .iter()
                        .zip(zi)
                        .map(|(x, z)| GElement {
                            h: with_central(p, &x.h, &zbox[z]),
                            tau: x.tau,
                        })
                        .collect(),
                );
                true
            }
            None => false,
        }
    });
    match found {
        Some(v) => OracleOutcome::Found(v),
        None => OracleOutcome::NotFound(bound),
    }
}

#[cfg(test)]
mod tests;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::{MalcevError, MalcevPresentation};

/// Exponent vector of a Mal'cev normal form word
/// `a_1^{i_1}..a_n^{i_n} b_1^{j_1}..b_r^{j_r} c^p d_1^{q_1}..d_t^{q_t}`
/// with `0 <= j_x < l_x` and `0 <= q_x < k_x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    pub(crate) a: Vec<BigInt>,
    pub(crate) b: Vec<BigInt>,
    /// `central[0]` is the exponent of `c`, `central[m]` that of `d_m`.
    pub(crate) central: Vec<BigInt>,
}

impl NormalForm {
    pub fn identity(p: &MalcevPresentation) -> Self {
        NormalForm {
            a: vec![BigInt::zero(); p.n()],
            b: vec![BigInt::zero(); p.r()],
            central: vec![BigInt::zero(); p.t() + 1],
        }
    }

    /// The generator with index `g` (see [`MalcevPresentation`] for the layout).
    pub fn generator(p: &MalcevPresentation, g: usize) -> Self {
        p.evaluate_word(&[(g, BigInt::one())])
            .expect("generator index in range")
    }

    /// Builds a normal form from `[a.., b.., c, d..]`, rejecting out-of-range
    /// torsion exponents.
    pub fn from_vec(p: &MalcevPresentation, v: &[BigInt]) -> Result<Self, MalcevError> {
        if v.len() != p.generator_count() {
            return Err(MalcevError::IndexOutOfRange(format!(
                "normal form vector has {} entries, expected {}",
                v.len(),
                p.generator_count()
            )));
        }
        let (n, r) = (p.n(), p.r());
        let nf = NormalForm {
            a: v[..n].to_vec(),
            b: v[n..n + r].to_vec(),
            central: v[n + r..].to_vec(),
        };
        for (i, j) in nf.b.iter().enumerate() {
            if j.is_negative() || *j >= p.l()[i] {
                return Err(MalcevError::IndexOutOfRange(format!(
                    "b_{} exponent {j} not in [0, {})",
                    i + 1,
                    p.l()[i]
                )));
            }
        }
        for (m, q) in nf.central.iter().enumerate().skip(1) {
            if q.is_negative() || *q >= p.k()[m - 1] {
                return Err(MalcevError::IndexOutOfRange(format!(
                    "d_{m} exponent {q} not in [0, {})",
                    p.k()[m - 1]
                )));
            }
        }
        Ok(nf)
    }

    /// Collects an arbitrary exponent vector (treated as the word
    /// `a^.. b^.. c^.. d^..` in generator order) into normal form.
    pub fn from_word_exponents(p: &MalcevPresentation, v: &[BigInt]) -> Result<Self, MalcevError> {
        if v.len() != p.generator_count() {
            return Err(MalcevError::IndexOutOfRange(format!(
                "exponent vector has {} entries, expected {}",
                v.len(),
                p.generator_count()
            )));
        }
        let word: Vec<(usize, BigInt)> = v.iter().cloned().enumerate().collect();
        p.evaluate_word(&word)
    }

    pub fn to_vec(&self) -> Vec<BigInt> {
        let mut v = self.a.clone();
        v.extend(self.b.iter().cloned());
        v.extend(self.central.iter().cloned());
        v
    }

    pub fn a(&self) -> &[BigInt] {
        &self.a
    }

    pub fn b(&self) -> &[BigInt] {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.central[0]
    }

    pub fn d(&self) -> &[BigInt] {
        &self.central[1..]
    }

    /// `[c, d_1, .., d_t]` exponents.
    pub fn central(&self) -> &[BigInt] {
        &self.central
    }

    pub fn is_identity(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
            && self.b.iter().all(Zero::is_zero)
            && self.central.iter().all(Zero::is_zero)
    }

    /// True when the element lies in `<c, d_1, .., d_t>`.
    pub fn is_central(&self) -> bool {
        self.a.iter().all(Zero::is_zero) && self.b.iter().all(Zero::is_zero)
    }

    /// Exponent of every generator in order, as `(index, exponent)` syllables,
    /// skipping zeros.
    pub fn syllables(&self) -> impl Iterator<Item = (usize, &BigInt)> + '_ {
        self.a
            .iter()
            .chain(self.b.iter())
            .chain(self.central.iter())
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
    }

    /// Uniform random element with `a` and `c` exponents in `[-bound, bound]`
    /// and torsion exponents over their full ranges.
    pub fn random<R: Rng + ?Sized>(p: &MalcevPresentation, rng: &mut R, bound: i64) -> Self {
        let mut v = Vec::with_capacity(p.generator_count());
        for _ in 0..p.n() {
            v.push(BigInt::from(rng.gen_range(-bound..=bound)));
        }
        for l in p.l() {
            v.push(random_below(rng, l));
        }
        v.push(BigInt::from(rng.gen_range(-bound..=bound)));
        for k in p.k() {
            v.push(random_below(rng, k));
        }
        Self::from_vec(p, &v).expect("sampled in range")
    }

    /// Renders as a word over the presentation's generator names, e.g.
    /// `a1^2 b c^-3 d`; the identity renders as `1`.
    pub fn to_word(&self, p: &MalcevPresentation) -> String {
        let parts: Vec<String> = self
            .syllables()
            .map(|(g, e)| {
                if e.is_one() {
                    p.names()[g].clone()
                } else {
                    format!("{}^{}", p.names()[g], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

fn random_below<R: Rng + ?Sized>(rng: &mut R, bound: &BigInt) -> BigInt {
    let b: i64 = bound.try_into().unwrap_or(i64::MAX);
    BigInt::from(rng.gen_range(0..b.max(1)))
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "[{}", join(&self.a))?;
        if !self.b.is_empty() {
            write!(f, "|{}", join(&self.b))?;
        }
        write!(f, "|{}", self.central[0])?;
        if self.central.len() > 1 {
            write!(f, "|{}", join(&self.central[1..]))?;
        }
        write!(f, "]")
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{MalcevError, MalcevPresentation, NormalForm};

/// Syllable-level collector.
///
/// Non-central syllables are kept sorted by generator index. A syllable
/// `g_x^e` appended on the right travels left past every `g_y^f` with
/// `y > x`, paying `swap(x, y)^{f e}` into the central accumulator. Torsion
/// exponents of the `b`s are reduced only once everything is in order.
pub(crate) struct Collector<'p> {
    p: &'p MalcevPresentation,
    syllables: Vec<(usize, BigInt)>,
    central: Vec<BigInt>,
}

impl<'p> Collector<'p> {
    pub(crate) fn new(p: &'p MalcevPresentation) -> Self {
        Collector {
            p,
            syllables: Vec::with_capacity(p.noncentral_len()),
            central: vec![BigInt::zero(); p.t() + 1],
        }
    }

    pub(crate) fn push(&mut self, g: usize, e: &BigInt) {
        if e.is_zero() {
            return;
        }
        let g_len = self.p.noncentral_len();
        if g >= g_len {
            self.central[g - g_len] += e;
            return;
        }
        let mut pos = self.syllables.len();
        while pos > 0 && self.syllables[pos - 1].0 > g {
            let (y, f) = &self.syllables[pos - 1];
            let fe = f * e;
            for (acc, z) in self.central.iter_mut().zip(self.p.swap_cost(g, *y)) {
                if !z.is_zero() {
                    *acc += z * &fe;
                }
            }
            pos -= 1;
        }
        if pos > 0 && self.syllables[pos - 1].0 == g {
            self.syllables[pos - 1].1 += e;
            if self.syllables[pos - 1].1.is_zero() {
                self.syllables.remove(pos - 1);
            }
        } else {
            self.syllables.insert(pos, (g, e.clone()));
        }
    }

    pub(crate) fn push_normal_form(&mut self, u: &NormalForm) {
        for (g, e) in u.syllables() {
            self.push(g, e);
        }
    }

    pub(crate) fn finish(self) -> NormalForm {
        let p = self.p;
        let mut out = NormalForm::identity(p);
        let mut central = self.central;
        for (g, e) in self.syllables {
            if g < p.n() {
                out.a[g] = e;
            } else {
                let i = g - p.n();
                let (q, rem) = e.div_mod_floor(&p.l()[i]);
                if !q.is_zero() {
                    for (acc, z) in central.iter_mut().zip(p.eta(i)) {
                        *acc += z * &q;
                    }
                }
                out.b[i] = rem;
            }
        }
        p.reduce_central(&mut central);
        out.central = central;
        out
    }
}

impl MalcevPresentation {
    /// Normal form of `u v`.
    pub fn multiply(&self, u: &NormalForm, v: &NormalForm) -> NormalForm {
        let mut col = Collector::new(self);
        col.push_normal_form(u);
        col.push_normal_form(v);
        col.finish()
    }

    pub fn invert(&self, u: &NormalForm) -> NormalForm {
        let mut col = Collector::new(self);
        let syl: Vec<(usize, &BigInt)> = u.syllables().collect();
        for (g, e) in syl.into_iter().rev() {
            col.push(g, &-e);
        }
        col.finish()
    }

    /// `u^e` by repeated squaring; negative `e` inverts first.
    pub fn power(&self, u: &NormalForm, e: &BigInt) -> NormalForm {
        let mut base = if e.is_negative() {
            self.invert(u)
        } else {
            u.clone()
        };
        let mut e = e.abs();
        let mut acc = NormalForm::identity(self);
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.multiply(&acc, &base);
            }
            e /= &two;
            if !e.is_zero() {
                base = self.multiply(&base, &base);
            }
        }
        acc
    }

    /// `[u, v] = u^{-1} v^{-1} u v`.
    pub fn commutator(&self, u: &NormalForm, v: &NormalForm) -> NormalForm {
        let mut col = Collector::new(self);
        col.push_normal_form(&self.invert(u));
        col.push_normal_form(&self.invert(v));
        col.push_normal_form(u);
        col.push_normal_form(v);
        col.finish()
    }

    /// Left-to-right product of generator powers `(index, exponent)`.
    pub fn evaluate_word(&self, word: &[(usize, BigInt)]) -> Result<NormalForm, MalcevError> {
        let mut col = Collector::new(self);
        for (g, e) in word {
            if *g >= self.generator_count() {
                return Err(MalcevError::UnknownGenerator(format!("index {g}")));
            }
            col.push(*g, e);
        }
        Ok(col.finish())
    }

    /// Product of a sequence of normal forms.
    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a NormalForm>) -> NormalForm {
        let mut col = Collector::new(self);
        for f in factors {
            col.push_normal_form(f);
        }
        col.finish()
    }
}

//! Complete decision procedure for one quadratic equation in two variables,
//! optionally filtered by a predicate that is periodic in both coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::budget::{Budget, Exhausted};
use super::definite::{definite_sign, enumerate_definite, integer_roots};
use super::numtheory::{divisors, exact_sqrt};
use super::pell::{class_representatives, fundamental_unit, mul, pow, residue};
use super::SolverConfig;
use crate::symbolic::QuadExpr;

/// `a x² + b xy + c y² + d x + e y + f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryQuadratic {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigInt,
    pub f: BigInt,
}

impl BinaryQuadratic {
    pub fn new(coeffs: [i64; 6]) -> Self {
        let [a, b, c, d, e, f] = coeffs.map(BigInt::from);
        BinaryQuadratic { a, b, c, d, e, f }
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y + &self.d * x + &self.e * y + &self.f
    }

    fn swapped(&self) -> Self {
        BinaryQuadratic {
            a: self.c.clone(),
            b: self.b.clone(),
            c: self.a.clone(),
            d: self.e.clone(),
            e: self.d.clone(),
            f: self.f.clone(),
        }
    }

    fn to_expr(&self) -> QuadExpr {
        let mut q = QuadExpr::constant(self.f.clone());
        q.add_quad(0, 0, &self.a);
        q.add_quad(0, 1, &self.b);
        q.add_quad(1, 1, &self.c);
        q.affine_mut().add_term(0, &self.d);
        q.affine_mut().add_term(1, &self.e);
        q
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BinaryOutcome {
    Found(BigInt, BigInt),
    /// The case analysis was complete and nothing was accepted.
    NoSolution,
    Incomplete(String),
}

/// Searches for an integer zero `(x, y)` of `q` with `accept(x, y)`.
///
/// With `period = Some(M)`, `accept` must depend only on `x mod M` and
/// `y mod M`; the answer is then exact on every branch of the case analysis
/// that is not cut short by a limit. Without a period, infinite solution
/// families are only scanned up to `cfg.search_bound`.
pub fn solve_binary(
    q: &BinaryQuadratic,
    period: Option<&BigInt>,
    accept: &mut dyn FnMut(&BigInt, &BigInt) -> bool,
    cfg: &SolverConfig,
) -> BinaryOutcome {
    let budget = Budget::new(cfg.node_limit, Some(cfg.time_budget_ms));
    solve_binary_in(q, period, accept, cfg, &budget)
}

pub(crate) fn solve_binary_in(
    q: &BinaryQuadratic,
    period: Option<&BigInt>,
    accept: &mut dyn FnMut(&BigInt, &BigInt) -> bool,
    cfg: &SolverConfig,
    budget: &Budget,
) -> BinaryOutcome {
    let mut s = Search {
        q,
        period: period.cloned(),
        accept,
        cfg,
        budget,
        incomplete: None,
    };
    match s.run() {
        Ok(Some((x, y))) => BinaryOutcome::Found(x, y),
        Ok(None) => match s.incomplete {
            None => BinaryOutcome::NoSolution,
            Some(r) => BinaryOutcome::Incomplete(r),
        },
        Err(e) => BinaryOutcome::Incomplete(e.reason().into()),
    }
}

type Found = Result<Option<(BigInt, BigInt)>, Exhausted>;

struct Search<'a> {
    q: &'a BinaryQuadratic,
    period: Option<BigInt>,
    accept: &'a mut dyn FnMut(&BigInt, &BigInt) -> bool,
    cfg: &'a SolverConfig,
    budget: &'a Budget,
    incomplete: Option<String>,
}

/// Residue ranges beyond this are not scanned.
const SCAN_LIMIT: u64 = 4_000_000;
/// Trial-division steps allowed when factoring.
const FACTOR_LIMIT: u64 = 1_000_000;

impl Search<'_> {
    fn give_up(&mut self, reason: &str) {
        self.incomplete.get_or_insert_with(|| reason.to_string());
    }

    /// Accepts `(x, y)` only if it really is a zero of the equation.
    fn check(&mut self, x: &BigInt, y: &BigInt) -> Found {
        self.budget.tick()?;
        if self.q.eval(x, y).is_zero() && (self.accept)(x, y) {
            return Ok(Some((x.clone(), y.clone())));
        }
        Ok(None)
    }

    fn modulus(&self) -> BigInt {
        self.period.clone().unwrap_or_else(BigInt::one)
    }

    fn run(&mut self) -> Found {
        let q = self.q;
        if q.a.is_zero() && !q.c.is_zero() {
            let swapped = q.swapped();
            let accept = &mut *self.accept;
            let mut flipped = |x: &BigInt, y: &BigInt| accept(y, x);
            let mut inner = Search {
                q: &swapped,
                period: self.period.clone(),
                accept: &mut flipped,
                cfg: self.cfg,
                budget: self.budget,
                incomplete: None,
            };
            let r = inner.run()?;
            if let Some(reason) = inner.incomplete {
                self.give_up(&reason);
            }
            return Ok(r.map(|(x, y)| (y, x)));
        }
        if q.a.is_zero() {
            if q.b.is_zero() {
                return self.linear(&q.d, &q.e, &q.f);
            }
            return self.hyperbolic();
        }
        let disc = &q.b * &q.b - BigInt::from(4) * &q.a * &q.c;
        if disc.is_negative() {
            self.definite()
        } else if disc.is_zero() {
            self.parabolic()
        } else {
            self.indefinite(&disc)
        }
    }

    /// Points of `d x + e y + f = 0`.
    fn linear(&mut self, d: &BigInt, e: &BigInt, f: &BigInt) -> Found {
        if d.is_zero() && e.is_zero() {
            if !f.is_zero() {
                return Ok(None);
            }
            return self.plane();
        }
        let eg = d.extended_gcd(e);
        let (quo, rem) = (-f).div_rem(&eg.gcd);
        if !rem.is_zero() {
            return Ok(None);
        }
        let x0 = &eg.x * &quo;
        let y0 = &eg.y * &quo;
        let dx = e / &eg.gcd;
        let dy = -(d / &eg.gcd);
        self.line(&x0, &y0, &dx, &dy)
    }

    /// `(x0 + t dx, y0 + t dy)` for `t ∈ ℤ`.
    fn line(&mut self, x0: &BigInt, y0: &BigInt, dx: &BigInt, dy: &BigInt) -> Found {
        let at = |t: &BigInt| (x0 + t * dx, y0 + t * dy);
        match self.period.clone() {
            Some(m) => {
                if m > BigInt::from(SCAN_LIMIT) {
                    self.give_up("period too large to scan");
                    return self.bounded_line(&at);
                }
                let mut t = BigInt::zero();
                while t < m {
                    let (x, y) = at(&t);
                    if let Some(hit) = self.check(&x, &y)? {
                        return Ok(Some(hit));
                    }
                    t += 1;
                }
                Ok(None)
            }
            None => {
                if dx.is_zero() && dy.is_zero() {
                    let (x, y) = at(&BigInt::zero());
                    return self.check(&x, &y);
                }
                self.give_up("search bound reached");
                self.bounded_line(&at)
            }
        }
    }

    fn bounded_line(&mut self, at: &dyn Fn(&BigInt) -> (BigInt, BigInt)) -> Found {
        for t in symmetric(self.cfg.search_bound) {
            let (x, y) = at(&t);
            if let Some(hit) = self.check(&x, &y)? {
                return Ok(Some(hit));
            }
        }
        Ok(None)
    }

    /// Every point satisfies the equation.
    fn plane(&mut self) -> Found {
        let m = self.modulus();
        let range = match self.period {
            Some(_) if m <= BigInt::from(2048) => m.to_i64().expect("small"),
            _ => {
                self.give_up("search bound reached");
                self.cfg.search_bound.min(2048) as i64
            }
        };
        for x in 0..range {
            for y in 0..range {
                if let Some(hit) = self.check(&x.into(), &y.into())? {
                    return Ok(Some(hit));
                }
            }
        }
        Ok(None)
    }

    /// `a = c = 0`, `b != 0`: `(b x + e)(b y + d) = d e - b f`.
    fn hyperbolic(&mut self) -> Found {
        let q = self.q;
        let n = &q.d * &q.e - &q.b * &q.f;
        if n.is_zero() {
            if (&q.e % &q.b).is_zero() {
                let x0 = -(&q.e / &q.b);
                if let Some(hit) = self.line(&x0, &BigInt::zero(), &BigInt::zero(), &BigInt::one())? {
                    return Ok(Some(hit));
                }
            }
            if (&q.d % &q.b).is_zero() {
                let y0 = -(&q.d / &q.b);
                return self.line(&BigInt::zero(), &y0, &BigInt::one(), &BigInt::zero());
            }
            return Ok(None);
        }
        let Some(divs) = divisors(&n, FACTOR_LIMIT) else {
            self.give_up("could not factor the right-hand side");
            return self.fallback_scan();
        };
        for delta in divs {
            for u in [delta.clone(), -delta] {
                let v = &n / &u;
                let (x, rx) = (&u - &q.e).div_rem(&q.b);
                let (y, ry) = (&v - &q.d).div_rem(&q.b);
                if rx.is_zero() && ry.is_zero() {
                    if let Some(hit) = self.check(&x, &y)? {
                        return Ok(Some(hit));
                    }
                }
            }
        }
        Ok(None)
    }

    fn definite(&mut self) -> Found {
        let expr = self.q.to_expr();
        debug_assert!(definite_sign(&expr, &[0, 1]).is_some());
        let mut hit = None;
        let accept = &mut *self.accept;
        enumerate_definite(&expr, &[0, 1], 2, self.budget, &mut |p| {
            if accept(&p[0], &p[1]) {
                hit = Some((p[0].clone(), p[1].clone()));
                return Ok(true);
            }
            Ok(false)
        })?;
        Ok(hit)
    }

    /// `b² = 4ac`, `a != 0`. With `u = 2ax + by` the equation becomes
    /// `u² + 2du + 4af + (4ae - 2bd) y = 0`.
    fn parabolic(&mut self) -> Found {
        let q = self.q;
        let two_a = &q.a * 2;
        let k: BigInt = &q.a * &q.e * 4 - &q.b * &q.d * 2;
        if k.is_zero() {
            let four_af = &q.a * &q.f * 4;
            let Some(s) = exact_sqrt(&(&q.d * &q.d - four_af)) else {
                return Ok(None);
            };
            let roots = if s.is_zero() {
                vec![-&q.d]
            } else {
                vec![-&q.d + &s, -&q.d - &s]
            };
            for u in roots {
                if let Some(hit) = self.linear(&two_a, &q.b, &-u)? {
                    return Ok(Some(hit));
                }
            }
            return Ok(None);
        }
        let at = |u: &BigInt| -> Option<(BigInt, BigInt)> {
            let sum: BigInt = u * u + &q.d * u * 2 + &q.a * &q.f * 4;
            let num = -sum;
            let (y, ry) = num.div_rem(&k);
            if !ry.is_zero() {
                return None;
            }
            let (x, rx) = (u - &q.b * &y).div_rem(&two_a);
            rx.is_zero().then_some((x, y))
        };
        // integrality and acceptance depend on u mod 2|a||k|M only
        let span = two_a.abs() * k.abs() * self.modulus();
        if self.period.is_some() && span <= BigInt::from(SCAN_LIMIT) {
            let mut u = BigInt::zero();
            while u < span {
                self.budget.tick()?;
                if let Some((x, y)) = at(&u) {
                    if let Some(hit) = self.check(&x, &y)? {
                        return Ok(Some(hit));
                    }
                }
                u += 1;
            }
            return Ok(None);
        }
        self.give_up(if self.period.is_some() {
            "period too large to scan"
        } else {
            "search bound reached"
        });
        for u in symmetric(self.cfg.search_bound.saturating_mul(self.cfg.search_bound)) {
            if let Some((x, y)) = at(&u) {
                if let Some(hit) = self.check(&x, &y)? {
                    return Ok(Some(hit));
                }
            }
        }
        Ok(None)
    }

    /// `b² > 4ac`, `a != 0`. With `X = 2ax + by + d`, `Y = Dy - g`,
    /// `g = 2ae - bd`, the equation becomes `Y² - D X² = g² + D(4af - d²)`.
    fn indefinite(&mut self, disc: &BigInt) -> Found {
        let q = self.q;
        let g = &q.a * &q.e * 2 - &q.b * &q.d;
        let n: BigInt = &g * &g + disc * (&q.a * &q.f * 4 - &q.d * &q.d);
        let back = |yy: &BigInt, xx: &BigInt| -> Option<(BigInt, BigInt)> {
            let sum: BigInt = yy + &g;
            let (y, ry) = sum.div_rem(disc);
            if !ry.is_zero() {
                return None;
            }
            let (x, rx) = (xx - &q.b * &y - &q.d).div_rem(&(&q.a * 2));
            rx.is_zero().then_some((x, y))
        };
        if let Some(s) = exact_sqrt(disc) {
            if n.is_zero() {
                // D y - g = ±s (2ax + by + d)
                for sign in [1, -1] {
                    let ss = &s * sign;
                    let cx: BigInt = &ss * &q.a * -2;
                    let cy = disc - &ss * &q.b;
                    let c0 = -(&g) - &ss * &q.d;
                    if let Some(hit) = self.linear(&cx, &cy, &c0)? {
                        return Ok(Some(hit));
                    }
                }
                return Ok(None);
            }
            let Some(divs) = divisors(&n, FACTOR_LIMIT) else {
                self.give_up("could not factor the right-hand side");
                return Ok(None);
            };
            // (Y - sX)(Y + sX) = N
            for delta in divs {
                for lo in [delta.clone(), -delta] {
                    let hi = &n / &lo;
                    let (yy, r1) = (&lo + &hi).div_rem(&BigInt::from(2));
                    let (xx, r2) = (&hi - &lo).div_rem(&(&s * 2));
                    if !r1.is_zero() || !r2.is_zero() {
                        continue;
                    }
                    if let Some((x, y)) = back(&yy, &xx) {
                        if let Some(hit) = self.check(&x, &y)? {
                            return Ok(Some(hit));
                        }
                    }
                }
            }
            return Ok(None);
        }
        if n.is_zero() {
            return match back(&BigInt::zero(), &BigInt::zero()) {
                Some((x, y)) => self.check(&x, &y),
                None => Ok(None),
            };
        }
        let Some((x1, y1)) = fundamental_unit(disc, self.cfg.pell_period_limit) else {
            self.give_up("continued fraction period limit reached");
            return self.fallback_scan();
        };
        let Some(reps) = class_representatives(disc, &n, self.cfg.pell_period_limit, SCAN_LIMIT) else {
            self.give_up("too many candidate class representatives");
            return self.fallback_scan();
        };
        self.budget.charge(reps.len() as u64)?;
        let m = self.modulus();
        self.pell_periodic(disc, &m, &reps, (&x1, &y1), &back)
    }

    /// Walks each orbit `rep · ε^k` modulo `W = 2|a| D M`, which determines
    /// integrality of `(x, y)` and their residues mod `M`. The orbit modulo
    /// `W` is purely periodic because `ε` is a unit, so one period covers
    /// every `k ∈ ℤ`. Without a period (`M = 1`) the residues only decide
    /// integrality; `accept` is then tried on the real points of a few
    /// periods and a rejection leaves the answer incomplete.
    fn pell_periodic(
        &mut self,
        disc: &BigInt,
        m: &BigInt,
        reps: &[(BigInt, BigInt)],
        unit: (&BigInt, &BigInt),
        back: &dyn Fn(&BigInt, &BigInt) -> Option<(BigInt, BigInt)>,
    ) -> Found {
        let q = self.q;
        let w = q.a.abs() * 2 * disc * m;
        let unit_w = (residue(unit.0, &w), residue(unit.1, &w));
        let cap = self.cfg.pell_period_limit;
        for rep in reps {
            let start = (residue(&rep.0, &w), residue(&rep.1, &w));
            let mut cur = start.clone();
            let mut k: u64 = 0;
            let mut hits = Vec::new();
            loop {
                self.budget.tick()?;
                if let Some((xr, yr)) = back(&cur.0, &cur.1) {
                    let (xr, yr) = (residue(&xr, m), residue(&yr, m));
                    if self.period.is_none() || (self.accept)(&xr, &yr) {
                        hits.push(k);
                    }
                }
                let next = mul(disc, (&cur.0, &cur.1), (&unit_w.0, &unit_w.1));
                cur = (residue(&next.0, &w), residue(&next.1, &w));
                k += 1;
                if cur == start {
                    break;
                }
                if k >= cap {
                    self.give_up("pell period limit reached");
                    break;
                }
            }
            let repeats = if self.period.is_some() { 1 } else { PELL_REPEATS };
            for j in 0..repeats {
                for &h in &hits {
                    for e in [h as i64 + j * k as i64, h as i64 - (j + 1) * k as i64] {
                        let (yy, xx) = pell_point(disc, rep, unit, e);
                        let (x, y) = back(&yy, &xx).expect("residues decide integrality");
                        if let Some(hit) = self.check(&x, &y)? {
                            return Ok(Some(hit));
                        }
                    }
                }
            }
            if self.period.is_none() && !hits.is_empty() {
                self.give_up("search bound reached");
            }
        }
        Ok(None)
    }

    /// Tries every `x` (and every `y`) in `[-B², B²]` with
    /// `B = search_bound`, solving for the other coordinate.
    fn fallback_scan(&mut self) -> Found {
        let q = self.q;
        let r = self.cfg.search_bound.saturating_mul(self.cfg.search_bound).min(SCAN_LIMIT);
        for t in symmetric(r) {
            // c y² + (b x + e) y + (a x² + d x + f) = 0 at x = t
            let ys = integer_roots(&q.c, &(&q.b * &t + &q.e), &(&q.a * &t * &t + &q.d * &t + &q.f));
            for y in ys {
                if let Some(hit) = self.check(&t, &y)? {
                    return Ok(Some(hit));
                }
            }
            let xs = integer_roots(&q.a, &(&q.b * &t + &q.d), &(&q.c * &t * &t + &q.e * &t + &q.f));
            for x in xs {
                if let Some(hit) = self.check(&x, &t)? {
                    return Ok(Some(hit));
                }
            }
        }
        Ok(None)
    }
}

/// Periods of a Pell orbit tried in each direction when `accept` is not
/// periodic.
const PELL_REPEATS: i64 = 4;

/// `rep · ε^k` for `k ∈ ℤ`; `ε^{-1}` is the conjugate since `ε` has norm 1.
fn pell_point(
    disc: &BigInt,
    rep: &(BigInt, BigInt),
    unit: (&BigInt, &BigInt),
    k: i64,
) -> (BigInt, BigInt) {
    let e = if k >= 0 {
        pow(disc, unit, k as u64)
    } else {
        pow(disc, (unit.0, &-unit.1), k.unsigned_abs())
    };
    mul(disc, (&rep.0, &rep.1), (&e.0, &e.1))
}

/// `0, 1, -1, 2, -2, …, bound, -bound`.
fn symmetric(bound: u64) -> impl Iterator<Item = BigInt> {
    std::iter::once(BigInt::zero())
        .chain((1..=bound).flat_map(|t| [BigInt::from(t), -BigInt::from(t)]))
}

#[cfg(test)]
mod tests;

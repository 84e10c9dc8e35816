//! Equations `u² - D v² = N` for non-square `D > 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::numtheory::{exact_sqrt, isqrt};

/// Least `(x, y)` with `x, y > 0` and `x² - D y² = 1`, from the continued
/// fraction of `√D`. `None` if `D` is a square, not positive, or the period
/// exceeds `period_limit`.
pub fn fundamental_unit(d: &BigInt, period_limit: u64) -> Option<(BigInt, BigInt)> {
    if !d.is_positive() || exact_sqrt(d).is_some() {
        return None;
    }
    let a0 = isqrt(d);
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    // convergents h/k
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    // the unit appears after one period, or two when the period is odd
    for _ in 0..period_limit.saturating_mul(2) {
        if &h * &h - d * &k * &k == BigInt::one() {
            return Some((h, k));
        }
        m = &q * &a - &m;
        q = (d - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    None
}

/// `(u + v√D)(x + y√D)`.
pub(crate) fn mul(d: &BigInt, (u, v): (&BigInt, &BigInt), (x, y): (&BigInt, &BigInt)) -> (BigInt, BigInt) {
    (u * x + d * v * y, u * y + v * x)
}

/// `(x + y√D)^e` for `e >= 0`.
pub(crate) fn pow(d: &BigInt, unit: (&BigInt, &BigInt), mut e: u64) -> (BigInt, BigInt) {
    let mut acc = (BigInt::one(), BigInt::zero());
    let mut base = (unit.0.clone(), unit.1.clone());
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(d, (&acc.0, &acc.1), (&base.0, &base.1));
        }
        e >>= 1;
        if e > 0 {
            base = mul(d, (&base.0, &base.1), (&base.0, &base.1));
        }
    }
    acc
}

/// Least `(x, y)` with `x, y > 0` and `x² - D y² = -1`, if the equation is
/// solvable. Such a unit precedes the norm `+1` one in the expansion of `√D`.
pub(crate) fn negative_unit(d: &BigInt, period_limit: u64) -> Option<(BigInt, BigInt)> {
    if !d.is_positive() || exact_sqrt(d).is_some() {
        return None;
    }
    let a0 = isqrt(d);
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    for _ in 0..period_limit.saturating_mul(2) {
        let norm = &h * &h - d * &k * &k;
        if norm == -BigInt::one() {
            return Some((h, k));
        }
        if norm.is_one() {
            return None;
        }
        m = &q * &a - &m;
        q = (d - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    None
}

/// Representatives `(u, v)` of every class of solutions of `u² - D v² = N`
/// for non-square `D > 0` and `N != 0`: each solution is `±(u + v√D) ε^k`
/// for one of them and some `k ∈ ℤ`, where `ε` is the fundamental unit of
/// norm `+1`. Both signs of each representative are listed.
///
/// Solutions with `gcd(u, v) = f` are `f` times primitive solutions of
/// `u² - D v² = N / f²`. A primitive class is determined by the `z` with
/// `u ≡ z v (mod |m|)`, `z² ≡ D (mod |m|)`, and the continued fraction of
/// `(z + √D) / |m|` either reaches a complete quotient with `Q = ±1`, whose
/// preceding convergent lies in the class up to a unit, or the class is
/// empty. `None` if some `|m|` exceeds `limit` or an expansion exceeds
/// `period_limit` steps.
pub(crate) fn class_representatives(
    d: &BigInt,
    n: &BigInt,
    period_limit: u64,
    limit: u64,
) -> Option<Vec<(BigInt, BigInt)>> {
    let neg = negative_unit(d, period_limit);
    let s = isqrt(d);
    let mut out = Vec::new();
    let mut f = BigInt::one();
    while &f * &f <= n.abs() {
        let f2 = &f * &f;
        if (n % &f2).is_zero() {
            let m = n / &f2;
            let am = m.abs();
            if am > BigInt::from(limit) {
                return None;
            }
            let mut z0 = BigInt::zero();
            while z0 < am {
                if ((&z0 * &z0 - d) % &am).is_zero() {
                    let z = if &z0 * 2 > am { &z0 - &am } else { z0.clone() };
                    let rep = match reduce_to_unit(d, &s, &z, &am, period_limit)? {
                        Some((g, b, value)) if value == m => Some((g, b)),
                        Some((g, b, value)) if value == -&m => {
                            neg.as_ref().map(|(t, w)| mul(d, (&g, &b), (t, w)))
                        }
                        _ => None,
                    };
                    if let Some((u, v)) = rep {
                        for sign in [1, -1] {
                            let cand = (&u * &f * sign, &v * &f * sign);
                            if !out.contains(&cand) {
                                out.push(cand);
                            }
                        }
                    }
                }
                z0 += 1;
            }
        }
        f += 1;
    }
    Some(out)
}

/// Expands `(P_0 + √D) / Q_0` until the first `i >= 1` with `Q_i = ±1`.
/// Returns `(G_{i-1}, B_{i-1}, G² - D B²)`, `Some(None)` if the expansion
/// cycles first, `None` past `period_limit` steps.
#[allow(clippy::type_complexity)]
fn reduce_to_unit(
    d: &BigInt,
    s: &BigInt,
    p0: &BigInt,
    q0: &BigInt,
    period_limit: u64,
) -> Option<Option<(BigInt, BigInt, BigInt)>> {
    let (mut p, mut q) = (p0.clone(), q0.clone());
    let (mut g_prev, mut g) = (-p0, q0.clone());
    let (mut b_prev, mut b) = (BigInt::one(), BigInt::zero());
    let mut seen = std::collections::HashSet::new();
    for _ in 0..period_limit.saturating_mul(2).max(4) {
        let a: BigInt = if q.is_positive() {
            (&p + s).div_floor(&q)
        } else {
            (&p + s + BigInt::one()).div_floor(&q)
        };
        let g_next = &a * &g + &g_prev;
        let b_next = &a * &b + &b_prev;
        g_prev = std::mem::replace(&mut g, g_next);
        b_prev = std::mem::replace(&mut b, b_next);
        let p_next = &a * &q - &p;
        let q_next = (d - &p_next * &p_next) / &q;
        p = p_next;
        q = q_next;
        if q.abs().is_one() {
            let value = &g * &g - d * &b * &b;
            return Some(Some((g, b, value)));
        }
        if !seen.insert((p.clone(), q.clone())) {
            return Some(None);
        }
    }
    None
}

/// `a mod m` in `[0, m)`.
pub(crate) fn residue(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    /// Least positive `y` with `D y² + 1` square, by direct scan.
    fn scan_unit(d: i64, ymax: i64) -> Option<(i64, i64)> {
        (1..=ymax).find_map(|y| {
            let x2 = d * y * y + 1;
            let x = (x2 as f64).sqrt().round() as i64;
            (x * x == x2).then_some((x, y))
        })
    }

    #[test]
    fn unit_of_13() {
        assert_eq!(fundamental_unit(&b(13), 100), Some((b(649), b(180))));
        assert_eq!(scan_unit(13, 200), Some((649, 180)));
    }

    #[test]
    fn units_agree_with_scan() {
        for d in 2..60 {
            let Some((x, y)) = fundamental_unit(&b(d), 1000) else {
                assert!(exact_sqrt(&b(d)).is_some(), "D = {d}");
                continue;
            };
            if let Some((sx, sy)) = scan_unit(d, 20_000) {
                assert_eq!((x, y), (b(sx), b(sy)), "D = {d}");
            }
        }
    }

    #[test]
    fn squares_and_limits() {
        assert_eq!(fundamental_unit(&b(16), 100), None);
        assert_eq!(fundamental_unit(&b(0), 100), None);
        assert_eq!(fundamental_unit(&b(61), 2), None);
        assert_eq!(fundamental_unit(&b(61), 100).unwrap().0, "1766319049".parse().unwrap());
    }

    #[test]
    fn powers() {
        let (x, y) = pow(&b(2), (&b(3), &b(2)), 2);
        assert_eq!((x, y), (b(17), b(12)));
        assert_eq!(pow(&b(2), (&b(3), &b(2)), 0), (b(1), b(0)));
    }

    #[test]
    fn classes_cover_scan() {
        // every solution with |u|, |v| ≤ 200 lies in an orbit of a representative
        for (d, n) in [
            (2i64, 7i64),
            (3, -2),
            (5, -4),
            (7, 9),
            (13, -3),
            (13, 36),
            (10, -9),
            (6, 3),
            (17, -16),
            (29, 25),
            (41, -8),
        ] {
            let (x1, y1) = fundamental_unit(&b(d), 1000).unwrap();
            let reps = class_representatives(&b(d), &b(n), 1000, 10_000).unwrap();
            let inv = (x1.clone(), -y1.clone());
            let mut orbit = Vec::new();
            for r in &reps {
                for unit in [(&x1, &y1), (&inv.0, &inv.1)] {
                    let mut cur = r.clone();
                    for _ in 0..12 {
                        orbit.push(cur.clone());
                        cur = mul(&b(d), (&cur.0, &cur.1), unit);
                    }
                }
            }
            for u in -200i64..=200 {
                for v in -200i64..=200 {
                    if u * u - d * v * v == n {
                        assert!(orbit.contains(&(b(u), b(v))), "D={d} N={n} ({u},{v})");
                    }
                }
            }
        }
    }

    #[test]
    fn negative_units() {
        assert_eq!(negative_unit(&b(13), 100), Some((b(18), b(5))));
        assert_eq!(negative_unit(&b(2), 100), Some((b(1), b(1))));
        assert_eq!(negative_unit(&b(3), 100), None);
        assert_eq!(negative_unit(&b(34), 100), None);
    }

    /// Every class found by the scan has a representative, and empty
    /// results only occur when the scan finds nothing.
    #[test]
    fn classes_match_scan_for_small_parameters() {
        for d in 2i64..30 {
            if exact_sqrt(&b(d)).is_some() {
                continue;
            }
            let (x1, y1) = fundamental_unit(&b(d), 1000).unwrap();
            let inv = (x1.clone(), -y1.clone());
            for n in -40i64..=40 {
                if n == 0 {
                    continue;
                }
                let reps = class_representatives(&b(d), &b(n), 1000, 10_000).unwrap();
                for (u, v) in &reps {
                    assert_eq!(u * u - b(d) * v * v, b(n), "D={d} N={n}");
                }
                let mut orbit = Vec::new();
                for r in &reps {
                    for unit in [(&x1, &y1), (&inv.0, &inv.1)] {
                        let mut cur = r.clone();
                        for _ in 0..8 {
                            orbit.push(cur.clone());
                            cur = mul(&b(d), (&cur.0, &cur.1), unit);
                        }
                    }
                }
                for v in -60i64..=60 {
                    let u2 = n + d * v * v;
                    if u2 < 0 {
                        continue;
                    }
                    if let Some(u) = exact_sqrt(&b(u2)) {
                        for u in [u.clone(), -u] {
                            assert!(orbit.contains(&(u.clone(), b(v))), "D={d} N={n} ({u},{v})");
                        }
                    }
                }
            }
        }
    }
}

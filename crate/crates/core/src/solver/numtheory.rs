//! Small exact number-theoretic helpers on big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `⌊√n⌋` for `n >= 0`.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative number");
    n.sqrt()
}

/// `Some(√n)` when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = isqrt(n);
    (&r * &r == *n).then_some(r)
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        BigInt::zero()
    } else {
        a.lcm(b)
    }
}

/// Inverse of `a` modulo `m > 1`, if `gcd(a, m) = 1`, in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// All positive divisors of `n != 0`, ascending, by trial division.
/// `None` when `|n|` has a prime factor above `limit` that would need
/// trial division past `limit`.
pub fn divisors(n: &BigInt, limit: u64) -> Option<Vec<BigInt>> {
    let mut rest = n.abs();
    assert!(!rest.is_zero(), "divisors of zero");
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    let mut steps = 0u64;
    while &p * &p <= rest {
        steps += 1;
        if steps > limit {
            return None;
        }
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        factors.push((rest, 1));
    }
    let mut out = vec![BigInt::one()];
    for (q, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pow = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pow);
                pow *= &q;
            }
        }
        out = next;
    }
    out.sort();
    Some(out)
}

/// Moduli tried by the obstruction scan: primes up to 13 and small prime
/// powers.
pub const SMALL_MODULI: [u32; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

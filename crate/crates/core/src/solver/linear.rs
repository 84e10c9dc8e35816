//! Integer linear systems by unimodular column reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::symbolic::AffineForm;

/// General integer solution `particular + Σ λ_j basis[j]` of a linear system.
/// `basis` is in column Hermite form: each vector has a positive leading
/// entry at a strictly later coordinate than the previous one, and the
/// entries above later leading entries are reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Vec<BigInt>,
    pub basis: Vec<Vec<BigInt>>,
}

impl LinearSolution {
    /// Coordinates `λ` with `x = particular + Σ λ_j basis[j]`, if any.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest: Vec<BigInt> = x.iter().zip(&self.particular).map(|(a, b)| a - b).collect();
        let mut lambda = Vec::with_capacity(self.basis.len());
        for col in &self.basis {
            let lead = col.iter().position(|c| !c.is_zero())?;
            let (q, r) = rest[lead].div_rem(&col[lead]);
            if !r.is_zero() {
                return None;
            }
            for (ri, ci) in rest.iter_mut().zip(col) {
                *ri -= &q * ci;
            }
            lambda.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(lambda)
    }

    pub fn point(&self, lambda: &[BigInt]) -> Vec<BigInt> {
        let mut x = self.particular.clone();
        for (l, col) in lambda.iter().zip(&self.basis) {
            for (xi, ci) in x.iter_mut().zip(col) {
                *xi += l * ci;
            }
        }
        x
    }
}

/// Column echelon form `H = A U` with `U` unimodular. Returns `(H, U,
/// pivot_rows)`: column `j < rank` of `H` has its first nonzero entry,
/// positive, at `pivot_rows[j]`, and columns from `rank` on are zero.
pub(crate) fn column_echelon(
    a: &[Vec<BigInt>],
    ncols: usize,
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<usize>) {
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut piv = 0;
    for i in 0..h.len() {
        if piv == ncols {
            break;
        }
        loop {
            let best = (piv..ncols)
                .filter(|&j| !h[i][j].is_zero())
                .min_by(|&x, &y| h[i][x].abs().cmp(&h[i][y].abs()));
            let Some(j) = best else { break };
            swap_cols(&mut h, &mut u, piv, j);
            let mut done = true;
            for j in piv + 1..ncols {
                if h[i][j].is_zero() {
                    continue;
                }
                let q = h[i][j].div_floor(&h[i][piv]);
                sub_col(&mut h, &mut u, j, piv, &q);
                if !h[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !h[i][piv].is_zero() {
            if h[i][piv].is_negative() {
                neg_col(&mut h, &mut u, piv);
            }
            pivots.push(i);
            piv += 1;
        }
    }
    (h, u, pivots)
}

fn swap_cols(h: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in h.iter_mut().chain(u.iter_mut()) {
            row.swap(a, b);
        }
    }
}

/// Column `j -= q · column k`.
fn sub_col(h: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], j: usize, k: usize, q: &BigInt) {
    for row in h.iter_mut().chain(u.iter_mut()) {
        let t = &row[k] * q;
        row[j] -= t;
    }
}

fn neg_col(h: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], j: usize) {
    for row in h.iter_mut().chain(u.iter_mut()) {
        row[j] = -&row[j];
    }
}

/// All integer solutions of `eqs[i] = 0` over variables `0..nvars`, or `None`
/// when there are none.
pub fn solve_linear(eqs: &[AffineForm], nvars: usize) -> Option<LinearSolution> {
    let a: Vec<Vec<BigInt>> = eqs
        .iter()
        .map(|f| (0..nvars).map(|v| f.coeff(v)).collect())
        .collect();
    let rhs: Vec<BigInt> = eqs.iter().map(|f| -f.constant_term()).collect();
    let (h, u, pivots) = column_echelon(&a, nvars);
    let rank = pivots.len();
    let mut y = vec![BigInt::zero(); nvars];
    let mut next = 0;
    for (i, row) in h.iter().enumerate() {
        let known = if next < rank && pivots[next] == i {
            next + 1
        } else {
            next
        };
        let mut acc = rhs[i].clone();
        for j in 0..next {
            acc -= &row[j] * &y[j];
        }
        if known > next {
            let (q, r) = acc.div_rem(&row[next]);
            if !r.is_zero() {
                return None;
            }
            y[next] = q;
            next = known;
        } else if !acc.is_zero() {
            return None;
        }
    }
    let particular: Vec<BigInt> = (0..nvars)
        .map(|i| (0..rank).map(|j| &u[i][j] * &y[j]).sum())
        .collect();
    let basis: Vec<Vec<BigInt>> = (rank..nvars)
        .map(|j| (0..nvars).map(|i| u[i][j].clone()).collect())
        .collect();
    Some(reduce_lattice(particular, &basis))
}

/// Replaces `basis` by the column Hermite form of the lattice it spans and
/// reduces `particular` modulo that lattice.
pub fn reduce_lattice(mut particular: Vec<BigInt>, basis: &[Vec<BigInt>]) -> LinearSolution {
    let n = particular.len();
    if basis.is_empty() {
        return LinearSolution {
            particular,
            basis: Vec::new(),
        };
    }
    let d = basis.len();
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..d).map(|j| basis[j][i].clone()).collect())
        .collect();
    let (mut h, _, pivots) = column_echelon(&m, d);
    let rank = pivots.len();
    for k in 0..rank {
        let pr = pivots[k];
        let pv = h[pr][k].clone();
        for j in 0..k {
            let q = h[pr][j].div_floor(&pv);
            if !q.is_zero() {
                for row in h.iter_mut() {
                    let t = &row[k] * &q;
                    row[j] -= t;
                }
            }
        }
        let q = particular[pr].div_floor(&pv);
        if !q.is_zero() {
            for (i, row) in h.iter().enumerate() {
                particular[i] -= &row[k] * &q;
            }
        }
    }
    let basis = (0..rank)
        .map(|j| (0..n).map(|i| h[i][j].clone()).collect())
        .collect();
    LinearSolution { particular, basis }
}

/// Solves the affine congruences `congs[i].0 ≡ 0 mod congs[i].1` over
/// variables `0..nvars`, each congruence `f ≡ 0 mod m` becoming `f - m K = 0`
/// with a fresh `K` that is projected away afterwards.
pub fn eliminate_congruences(
    congs: &[(AffineForm, BigInt)],
    nvars: usize,
) -> Option<LinearSolution> {
    let eqs: Vec<AffineForm> = congs
        .iter()
        .enumerate()
        .map(|(i, (f, m))| {
            let mut e = f.clone();
            e.add_term(nvars + i, &-m);
            e
        })
        .collect();
    let full = solve_linear(&eqs, nvars + congs.len())?;
    let particular = full.particular[..nvars].to_vec();
    let basis: Vec<Vec<BigInt>> = full.basis.iter().map(|c| c[..nvars].to_vec()).collect();
    Some(reduce_lattice(particular, &basis))
}

#[cfg(test)]
mod tests;

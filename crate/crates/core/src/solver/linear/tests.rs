use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

fn form(c: i64, coeffs: &[i64]) -> AffineForm {
    let mut f = AffineForm::constant(c);
    for (v, &k) in coeffs.iter().enumerate() {
        f.add_term(v, &b(k));
    }
    f
}

#[test]
fn one_equation_two_unknowns() {
    // 2X + Y + 1 = 0: X = λ, Y = -1 - 2λ
    let sol = solve_linear(&[form(1, &[2, 1])], 2).unwrap();
    assert_eq!(sol.particular, [b(0), b(-1)]);
    assert_eq!(sol.basis, [vec![b(1), b(-2)]]);
}

#[test]
fn indivisible_constant_is_infeasible() {
    assert_eq!(solve_linear(&[form(2, &[3])], 1), None);
}

#[test]
fn trivial_equation_leaves_everything_free() {
    let mut f = form(0, &[1]);
    f.add_term(0, &b(-1));
    let sol = solve_linear(&[f], 1).unwrap();
    assert_eq!(sol.particular, [b(0)]);
    assert_eq!(sol.basis, [vec![b(1)]]);
}

#[test]
fn single_congruence() {
    let sol = eliminate_congruences(&[(form(-1, &[1]), b(2))], 1).unwrap();
    assert_eq!(sol.particular, [b(1)]);
    assert_eq!(sol.basis, [vec![b(2)]]);
}

#[test]
fn chinese_remainder() {
    let sol = eliminate_congruences(&[(form(-1, &[1]), b(2)), (form(-2, &[1]), b(3))], 1).unwrap();
    assert_eq!(sol.particular, [b(5)]);
    assert_eq!(sol.basis, [vec![b(6)]]);
    let scan: Vec<i64> = (0..6).filter(|x| x % 2 == 1 && x % 3 == 2).collect();
    assert_eq!(scan, [5]);
}

#[test]
fn contradictory_congruences() {
    assert_eq!(
        eliminate_congruences(&[(form(0, &[1]), b(2)), (form(-1, &[1]), b(2))], 1),
        None
    );
}

fn satisfies(eqs: &[Vec<i64>], x: &[i64]) -> bool {
    eqs.iter().all(|row| {
        let (c, coeffs) = row.split_first().unwrap();
        c + coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() == 0
    })
}

fn box_points(nvars: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..nvars {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// The parametrization describes exactly the solutions in the box.
    #[test]
    fn agrees_with_box_scan(
        nvars in 1usize..=4,
        rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 5), 1..=3),
    ) {
        let rows: Vec<Vec<i64>> = rows.into_iter().map(|r| r[..=nvars].to_vec()).collect();
        let eqs: Vec<AffineForm> = rows.iter().map(|r| form(r[0], &r[1..])).collect();
        let sol = solve_linear(&eqs, nvars);
        let radius = if nvars == 4 { 6 } else { 10 };
        let found: Vec<Vec<i64>> = box_points(nvars, radius)
            .into_iter()
            .filter(|x| satisfies(&rows, x))
            .collect();
        match sol {
            None => prop_assert!(found.is_empty()),
            Some(sol) => {
                let to_i64 = |v: &[BigInt]| -> Vec<i64> {
                    v.iter().map(|x| i64::try_from(x).unwrap()).collect()
                };
                prop_assert!(satisfies(&rows, &to_i64(&sol.particular)));
                for col in &sol.basis {
                    let mut shifted = sol.particular.clone();
                    for (s, c) in shifted.iter_mut().zip(col) {
                        *s += c;
                    }
                    prop_assert!(satisfies(&rows, &to_i64(&shifted)));
                }
                for x in &found {
                    let xb: Vec<BigInt> = x.iter().map(|&v| b(v)).collect();
                    prop_assert!(sol.coordinates(&xb).is_some());
                }
            }
        }
    }

    /// Residues mod the lcm produced by the substitution match a direct scan.
    #[test]
    fn congruences_agree_with_residue_scan(
        congs in prop::collection::vec((-4i64..=4, -4i64..=4, -4i64..=4, 2i64..=6), 1..=3),
    ) {
        let forms: Vec<(AffineForm, BigInt)> = congs
            .iter()
            .map(|&(c, x, y, m)| (form(c, &[x, y]), b(m)))
            .collect();
        let l = congs.iter().fold(1i64, |acc, c| num_integer::lcm(acc, c.3));
        let direct: Vec<(i64, i64)> = (0..l)
            .flat_map(|x| (0..l).map(move |y| (x, y)))
            .filter(|&(x, y)| congs.iter().all(|&(c, a, bb, m)| (c + a * x + bb * y).rem_euclid(m) == 0))
            .collect();
        match eliminate_congruences(&forms, 2) {
            None => prop_assert!(direct.is_empty()),
            Some(sol) => {
                for x in 0..l {
                    for y in 0..l {
                        let inside = sol.coordinates(&[b(x), b(y)]).is_some();
                        prop_assert_eq!(inside, direct.contains(&(x, y)));
                    }
                }
            }
        }
    }
}

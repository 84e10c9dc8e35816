use proptest::prelude::*;

use super::*;

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

fn run(coeffs: [i64; 6]) -> BinaryOutcome {
    solve_binary(
        &BinaryQuadratic::new(coeffs),
        None,
        &mut |_, _| true,
        &SolverConfig::default(),
    )
}

fn scan(q: &BinaryQuadratic, r: i64) -> Option<(i64, i64)> {
    for x in -r..=r {
        for y in -r..=r {
            if q.eval(&b(x), &b(y)).is_zero() {
                return Some((x, y));
            }
        }
    }
    None
}

fn assert_found(coeffs: [i64; 6]) {
    let q = BinaryQuadratic::new(coeffs);
    match run(coeffs) {
        BinaryOutcome::Found(x, y) => assert!(q.eval(&x, &y).is_zero(), "{coeffs:?}"),
        other => panic!("{coeffs:?}: {other:?}"),
    }
}

#[test]
fn hyperbola_xy_minus_two() {
    assert_found([0, 1, 0, 0, 0, -2]);
}

#[test]
fn pell_thirteen() {
    assert_found([1, 0, -13, 0, 0, -1]);
}

#[test]
fn circle_without_points() {
    assert_eq!(run([1, 0, 1, 0, 0, 1]), BinaryOutcome::NoSolution);
    assert_eq!(run([1, 0, 1, 0, 0, -3]), BinaryOutcome::NoSolution);
    assert_found([1, 0, 1, 0, 0, -2]);
}

#[test]
fn negative_pell_obstructions() {
    // x² - 3y² = -1 has no solution (mod 3); x² - 34y² = -1 has none either
    // although it is locally solvable everywhere
    assert_eq!(run([1, 0, -3, 0, 0, 1]), BinaryOutcome::NoSolution);
    assert_eq!(run([1, 0, -34, 0, 0, 1]), BinaryOutcome::NoSolution);
    assert_found([1, 0, -2, 0, 0, 1]);
}

#[test]
fn parabola_and_degenerate_cases() {
    // y = x² + 1
    assert_found([1, 0, 0, 0, -1, 1]);
    // (x + y)² = 3 has no solution
    assert_eq!(run([1, 2, 1, 0, 0, -3]), BinaryOutcome::NoSolution);
    // (x - y)(x + y) = 0 contains lines
    assert_found([1, 0, -1, 0, 0, 0]);
    // square discriminant: x² - 4y² = 5 at (3, 1); = 3 and = 2 have no points
    assert_found([1, 0, -4, 0, 0, -5]);
    assert_eq!(run([1, 0, -4, 0, 0, -3]), BinaryOutcome::NoSolution);
    assert_eq!(run([1, 0, -4, 0, 0, -2]), BinaryOutcome::NoSolution);
}

#[test]
fn periodic_filter_makes_families_complete() {
    let cfg = SolverConfig::default();
    // y = x², x ≡ 1 mod 4 and y ≡ 3 mod 4 is impossible
    let q = BinaryQuadratic::new([1, 0, 0, 0, -1, 0]);
    let m = b(4);
    let out = solve_binary(
        &q,
        Some(&m),
        &mut |x, y| x.mod_floor(&m) == b(1) && y.mod_floor(&m) == b(3),
        &cfg,
    );
    assert_eq!(out, BinaryOutcome::NoSolution);
    // x² - 2y² = 1 with y ≡ 6 mod 7 has (17, 12)·ε^k solutions
    let q = BinaryQuadratic::new([1, 0, -2, 0, 0, -1]);
    let m = b(7);
    let out = solve_binary(&q, Some(&m), &mut |_, y| y.mod_floor(&m) == b(5), &cfg);
    match out {
        BinaryOutcome::Found(x, y) => {
            assert!(q.eval(&x, &y).is_zero());
            assert_eq!(y.mod_floor(&m), b(5));
        }
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn agrees_with_scan(coeffs in prop::array::uniform6(-10i64..=10)) {
        let q = BinaryQuadratic::new(coeffs);
        let out = run(coeffs);
        let scanned = scan(&q, 300);
        match &out {
            BinaryOutcome::Found(x, y) => prop_assert!(q.eval(x, y).is_zero()),
            BinaryOutcome::NoSolution => prop_assert_eq!(scanned, None),
            BinaryOutcome::Incomplete(_) => {}
        }
        if scanned.is_some() {
            prop_assert!(matches!(out, BinaryOutcome::Found(..)), "{:?} missed", out);
        }
    }
}

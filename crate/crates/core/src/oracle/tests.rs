use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::catalog;
use crate::fuzz::{random_equation, random_extension_equation, GenParams};

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Plain enumeration in the same order: non-central parts of every
/// variable, then central parts.
fn naive(eq: &EquationWord, p: &MalcevPresentation, bound: u64) -> OracleOutcome<NormalForm> {
    let n = eq.variables().len();
    let us = noncentral_box(p, bound);
    let zs = central_box(p, bound);
    let mut sizes = vec![us.len(); n];
    sizes.extend(vec![zs.len(); n]);
    let mut found = None;
    odometer(&sizes, |idx| {
        let values: Vec<NormalForm> = (0..n)
            .map(|v| with_central(p, &us[idx[v]], &zs[idx[n + v]]))
            .collect();
        if eq.evaluate(p, &values).unwrap().is_identity() {
            found = Some(values);
            true
        } else {
            false
        }
    });
    found.map_or(OracleOutcome::NotFound(bound), OracleOutcome::Found)
}

fn naive_extension(eq: &GEquationWord, ext: &ExtensionPresentation, bound: u64) -> OracleOutcome<GElement> {
    let p = ext.base();
    let (n, f) = (eq.variables().len(), ext.f());
    let us = noncentral_box(p, bound);
    let zs = central_box(p, bound);
    let mut sizes = vec![us.len() * f; n];
    sizes.extend(vec![zs.len(); n]);
    let mut found = None;
    odometer(&sizes, |idx| {
        let values: Vec<GElement> = (0..n)
            .map(|v| GElement {
                h: with_central(p, &us[idx[v] / f], &zs[idx[n + v]]),
                tau: idx[v] % f,
            })
            .collect();
        if eq.evaluate(ext, &values).unwrap() == ext.identity() {
            found = Some(values);
            true
        } else {
            false
        }
    });
    found.map_or(OracleOutcome::NotFound(bound), OracleOutcome::Found)
}

#[test]
fn example31_has_no_solution_in_box() {
    let p = catalog::example31();
    let eq = EquationWord::parse("X b a1 c X a2 c^-3 a1 X = 1", &p).unwrap();
    assert_eq!(brute_force(&eq, &p, 3), OracleOutcome::NotFound(3));
}

#[test]
fn heisenberg_linear_witness() {
    let p = catalog::heisenberg();
    let eq = EquationWord::parse("X a1 = 1", &p).unwrap();
    let expected = NormalForm::from_vec(&p, &[b(-1), b(0), b(0)]).unwrap();
    assert_eq!(brute_force(&eq, &p, 1), OracleOutcome::Found(vec![expected]));
}

#[test]
fn dihedral_square_witness() {
    let ext = catalog::infinite_dihedral();
    let eq = GEquationWord::parse("X X a^2 = 1", &ext).unwrap();
    let h = NormalForm::from_vec(ext.base(), &[b(-1), b(0)]).unwrap();
    assert_eq!(
        brute_force_extension(&eq, &ext, 2),
        OracleOutcome::Found(vec![GElement { h, tau: 0 }])
    );
    let eq = GEquationWord::parse("X X a = 1", &ext).unwrap();
    assert_eq!(brute_force_extension(&eq, &ext, 2), OracleOutcome::NotFound(2));
}

#[test]
fn constant_equations_are_decided_by_evaluation() {
    let p = catalog::example31();
    let eq = EquationWord::parse("b b c^-1 = 1", &p).unwrap();
    assert_eq!(brute_force(&eq, &p, 0), OracleOutcome::Found(vec![]));
    let eq = EquationWord::parse("b b = 1", &p).unwrap();
    assert_eq!(brute_force(&eq, &p, 0), OracleOutcome::NotFound(0));
}

#[test]
fn box_sizes() {
    let p = catalog::example31();
    assert_eq!(noncentral_box(&p, 2).len(), 5 * 5 * 2);
    assert_eq!(central_box(&p, 2).len(), 5 * 2);
    assert_eq!(element_box(&p, 1).len(), 3 * 3 * 2 * 3 * 2);
}

#[test]
fn central_split_agrees_with_plain_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let params = GenParams::default();
    for p in [catalog::example31(), catalog::heisenberg()] {
        for _ in 0..40 {
            let text = random_equation(&mut rng, &p, &params);
            let eq = EquationWord::parse(&text, &p).unwrap();
            assert_eq!(brute_force(&eq, &p, 1), naive(&eq, &p, 1), "{text}");
        }
    }
}

#[test]
fn extension_central_split_agrees_with_plain_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let params = GenParams::default();
    for ext in [catalog::infinite_dihedral(), catalog::heisenberg_c2()] {
        for _ in 0..40 {
            let text = random_extension_equation(&mut rng, &ext, &params);
            let eq = GEquationWord::parse(&text, &ext).unwrap();
            assert_eq!(
                brute_force_extension(&eq, &ext, 1),
                naive_extension(&eq, &ext, 1),
                "{text}"
            );
        }
    }
}

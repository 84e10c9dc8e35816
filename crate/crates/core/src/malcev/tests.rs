use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::catalog;

fn v(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn nf(p: &MalcevPresentation, xs: &[i64]) -> NormalForm {
    NormalForm::from_vec(p, &v(xs)).unwrap()
}

/// `a1^i a2^j c^p` as the upper unitriangular matrix with entries
/// `(1,2) = i`, `(2,3) = j`, `(1,3) = p + i j`.
#[derive(Clone, Debug, PartialEq)]
struct Unitri {
    x: BigInt,
    y: BigInt,
    z: BigInt,
}

impl Unitri {
    fn from_nf(u: &NormalForm) -> Self {
        let (i, j, p) = (u.a()[0].clone(), u.a()[1].clone(), u.c().clone());
        Unitri {
            z: &p + &i * &j,
            x: i,
            y: j,
        }
    }

    fn mul(&self, o: &Unitri) -> Unitri {
        Unitri {
            x: &self.x + &o.x,
            y: &self.y + &o.y,
            z: &self.z + &o.z + &self.x * &o.y,
        }
    }

    fn to_nf_vec(&self) -> Vec<BigInt> {
        vec![self.x.clone(), self.y.clone(), &self.z - &self.x * &self.y]
    }
}

#[test]
fn example31_presentation_validates() {
    let p = catalog::example31();
    p.validate(200, 7).unwrap();
}

#[test]
fn zero_torsion_order_is_rejected() {
    let err = MalcevPresentation::builder(2, 1, 1)
        .torsion(v(&[0]))
        .orders(v(&[2]))
        .build()
        .unwrap_err();
    assert!(matches!(err, MalcevError::NonPositiveOrder(_)));
}

#[test]
fn inconsistent_torsion_commutator_is_caught() {
    // [a, b]^2 = d^2 must vanish for b^2 to be central, but d has order 3.
    let p = MalcevPresentation::builder(1, 1, 1)
        .torsion(v(&[2]))
        .orders(v(&[3]))
        .gamma(1, 1, 1, 1)
        .build()
        .unwrap();
    let err = p.validate(1000, 1).unwrap_err();
    assert!(matches!(err, MalcevError::AssociativityFailure { .. }));

    // Brute-force scan over small exponents finds a witness as well.
    let mut found = false;
    'scan: for a in -2..=2 {
        for b in 0..2 {
            for a2 in -2..=2 {
                for b2 in 0..2 {
                    for a3 in -2..=2 {
                        for b3 in 0..2 {
                            let x = nf(&p, &[a, b, 0, 0]);
                            let y = nf(&p, &[a2, b2, 0, 0]);
                            let z = nf(&p, &[a3, b3, 0, 0]);
                            if p.multiply(&p.multiply(&x, &y), &z)
                                != p.multiply(&x, &p.multiply(&y, &z))
                            {
                                found = true;
                                break 'scan;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(found);
}

#[test]
fn bad_index_is_rejected() {
    let err = MalcevPresentation::builder(2, 0, 0)
        .alpha(2, 1, 0, 1)
        .build()
        .unwrap_err();
    assert!(matches!(err, MalcevError::IndexOutOfRange(_)));
    let err = MalcevPresentation::builder(2, 0, 0)
        .alpha(1, 2, 3, 1)
        .build()
        .unwrap_err();
    assert!(matches!(err, MalcevError::IndexOutOfRange(_)));
}

#[test]
fn heisenberg_multiply_examples() {
    let h = catalog::heisenberg();
    assert_eq!(
        h.multiply(&nf(&h, &[1, 0, 0]), &nf(&h, &[0, 1, 0])),
        nf(&h, &[1, 1, 0])
    );
    assert_eq!(
        h.multiply(&nf(&h, &[0, 1, 0]), &nf(&h, &[1, 0, 0])),
        nf(&h, &[1, 1, -1])
    );
}

#[test]
fn b_squared_is_c_in_example31() {
    let p = catalog::example31();
    let b = nf(&p, &[0, 0, 1, 0, 0]);
    assert_eq!(p.multiply(&b, &b), nf(&p, &[0, 0, 0, 1, 0]));
    let word = p
        .evaluate_word(&[(2, BigInt::from(1)), (2, BigInt::from(1))])
        .unwrap();
    assert_eq!(word, nf(&p, &[0, 0, 0, 1, 0]));
}

#[test]
fn invert_examples() {
    let h = catalog::heisenberg();
    assert!(h.invert(&NormalForm::identity(&h)).is_identity());
    let u = nf(&h, &[1, 1, 0]);
    let inv = h.invert(&u);
    assert_eq!(inv, nf(&h, &[-1, -1, -1]));
    assert!(h.multiply(&u, &inv).is_identity());
    assert_eq!(h.invert(&nf(&h, &[0, 0, 5])), nf(&h, &[0, 0, -5]));
}

#[test]
fn power_examples() {
    let h = catalog::heisenberg();
    assert_eq!(h.power(&nf(&h, &[1, 0, 0]), &BigInt::from(3)), nf(&h, &[3, 0, 0]));
    assert_eq!(h.power(&nf(&h, &[1, 1, 0]), &BigInt::from(2)), nf(&h, &[2, 2, -1]));
    assert!(h.power(&nf(&h, &[4, -2, 7]), &BigInt::from(0)).is_identity());
    let u = nf(&h, &[2, -3, 1]);
    let mut acc = NormalForm::identity(&h);
    let inv = h.invert(&u);
    for _ in 0..7 {
        acc = h.multiply(&acc, &inv);
    }
    assert_eq!(h.power(&u, &BigInt::from(-7)), acc);
}

#[test]
fn commutator_examples() {
    let h = catalog::heisenberg();
    let a1 = NormalForm::generator(&h, 0);
    let a2 = NormalForm::generator(&h, 1);
    assert_eq!(h.commutator(&a1, &a2), nf(&h, &[0, 0, 1]));
    let u = nf(&h, &[3, -1, 2]);
    assert!(h.commutator(&u, &u).is_identity());

    let p = catalog::example31();
    let a1 = NormalForm::generator(&p, 0);
    let b = NormalForm::generator(&p, 2);
    assert_eq!(p.commutator(&a1, &b), nf(&p, &[0, 0, 0, 0, 1]));
}

#[test]
fn evaluate_word_examples() {
    let h = catalog::heisenberg();
    let w = h
        .evaluate_word(&[(1, BigInt::from(1)), (0, BigInt::from(1))])
        .unwrap();
    assert_eq!(w, nf(&h, &[1, 1, -1]));
    assert!(h.evaluate_word(&[]).unwrap().is_identity());
    assert!(matches!(
        h.evaluate_word(&[(9, BigInt::from(1))]),
        Err(MalcevError::UnknownGenerator(_))
    ));
}

#[test]
fn heisenberg_matches_matrix_model() {
    let h = catalog::heisenberg();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10_000 {
        let u = NormalForm::random(&h, &mut rng, 50);
        let w = NormalForm::random(&h, &mut rng, 50);
        let expected = Unitri::from_nf(&u).mul(&Unitri::from_nf(&w));
        assert_eq!(h.multiply(&u, &w).to_vec(), expected.to_nf_vec());
    }
}

#[test]
fn group_axioms_and_commutator_identities() {
    for p in [catalog::example31(), catalog::heisenberg()] {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let id = NormalForm::identity(&p);
        for _ in 0..1000 {
            let u = NormalForm::random(&p, &mut rng, 5);
            let w = NormalForm::random(&p, &mut rng, 5);
            let x = NormalForm::random(&p, &mut rng, 5);
            assert_eq!(
                p.multiply(&p.multiply(&u, &w), &x),
                p.multiply(&u, &p.multiply(&w, &x))
            );
            assert_eq!(p.multiply(&u, &id), u);
            assert_eq!(p.multiply(&id, &u), u);
            assert!(p.multiply(&u, &p.invert(&u)).is_identity());
            let (ui, wi) = (p.invert(&u), p.invert(&w));
            assert_eq!(p.commutator(&ui, &wi), p.commutator(&u, &w));
            assert_eq!(p.commutator(&ui, &w), p.invert(&p.commutator(&u, &w)));
            assert!(p.commutator(&u, &w).is_central());
            for g in [&u, &w, &x] {
                for e in g.b() {
                    assert!(*e >= BigInt::from(0));
                }
            }
        }
    }
}

#[test]
fn central_elements_commute() {
    let p = catalog::example31();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let u = NormalForm::random(&p, &mut rng, 5);
        let mut z = NormalForm::identity(&p);
        z.central[0] = BigInt::from(rng.gen_range(-9..=9));
        z.central[1] = BigInt::from(rng.gen_range(0..2));
        assert_eq!(p.multiply(&u, &z), p.multiply(&z, &u));
    }
}

#[test]
fn automorphism_examples() {
    let h = catalog::heisenberg();
    let id = Automorphism::identity(&h);
    id.validate(&h).unwrap();
    let u = nf(&h, &[3, -2, 5]);
    assert_eq!(id.apply(&h, &u), u);

    let (_, inv) = h.automorphism("inv").unwrap();
    assert_eq!(inv.apply(&h, &nf(&h, &[1, 1, 0])), nf(&h, &[-1, -1, 0]));
    let (_, swap) = h.automorphism("swap").unwrap();
    assert_eq!(swap.apply(&h, &nf(&h, &[0, 0, 1])), nf(&h, &[0, 0, -1]));
}

#[test]
fn automorphisms_are_homomorphisms() {
    let h = catalog::heisenberg();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (_, theta) in h.automorphisms() {
        for _ in 0..200 {
            let u = NormalForm::random(&h, &mut rng, 6);
            let w = NormalForm::random(&h, &mut rng, 6);
            assert_eq!(
                theta.apply(&h, &h.multiply(&u, &w)),
                h.multiply(&theta.apply(&h, &u), &theta.apply(&h, &w))
            );
            assert_eq!(theta.apply_inverse(&h, &theta.apply(&h, &u)), u);
        }
    }
}

#[test]
fn non_automorphism_is_rejected() {
    let h = catalog::heisenberg();
    // a1 -> a1, a2 -> a2, c -> c^2 breaks [a1, a2] = c.
    let imgs = [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 2])];
    let bad = Automorphism::from_vectors(&h, &imgs, &imgs).unwrap();
    assert!(matches!(
        bad.validate(&h),
        Err(MalcevError::InvalidAutomorphism(_))
    ));
    // Homomorphism, but the supplied inverse is wrong.
    let imgs = [v(&[1, 1, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
    let bad = Automorphism::from_vectors(&h, &imgs, &imgs).unwrap();
    assert!(matches!(
        bad.validate(&h),
        Err(MalcevError::InvalidAutomorphism(_))
    ));
}

#[test]
fn shear_automorphism_and_its_inverse() {
    let h = catalog::heisenberg();
    let imgs = [v(&[1, 1, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
    let inv = [v(&[1, -1, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
    let shear = Automorphism::from_vectors(&h, &imgs, &inv).unwrap();
    shear.validate(&h).unwrap();
}

#[test]
fn presentation_json_round_trip() {
    for p in [catalog::example31(), catalog::heisenberg(), catalog::integers()] {
        let text = p.to_json();
        let back = MalcevPresentation::from_json(&text).unwrap();
        assert_eq!(back, p);
    }
}

#[test]
fn presentation_json_from_spec_layout() {
    let text = r#"{"n":2,"r":1,"t":1,"l":[2],"k":[2],
        "alpha":[[1,2,0,-1]],"beta":[],"gamma":[[1,1,1,1],[2,1,1,1]],
        "eta":[[1,0,1]],"names":["a1","a2","b","c","d"]}"#;
    let p = MalcevPresentation::from_json(text).unwrap();
    assert_eq!(p, catalog::example31());
}

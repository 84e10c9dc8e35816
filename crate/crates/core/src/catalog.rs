//! Built-in groups used by the examples, the fuzz harness and the tests.

use num_bigint::BigInt;

use crate::extension::ExtensionPresentation;
use crate::malcev::{Automorphism, MalcevPresentation, NormalForm};

fn v(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// `<a1, a2, b, c, d | c = [a1, a2], d = [a1, b] = [a2, b], b^2 = c, d^2 = 1>`
/// with `c`, `d` central.
pub fn example31() -> MalcevPresentation {
    MalcevPresentation::builder(2, 1, 1)
        .torsion(v(&[2]))
        .orders(v(&[2]))
        .alpha(1, 2, 0, -1)
        .gamma(1, 1, 1, 1)
        .gamma(2, 1, 1, 1)
        .eta(1, 0, 1)
        .names(["a1", "a2", "b", "c", "d"].map(String::from).to_vec())
        .build()
        .expect("example group is well formed")
}

/// Integral Heisenberg group `<a1, a2, c | c = [a1, a2] central>` with the
/// automorphisms `inv` (`a_i -> a_i^-1`) and `swap` (`a1 <-> a2`).
pub fn heisenberg() -> MalcevPresentation {
    let mut p = MalcevPresentation::builder(2, 0, 0)
        .alpha(1, 2, 0, -1)
        .names(["a1", "a2", "c"].map(String::from).to_vec())
        .build()
        .expect("Heisenberg group is well formed");
    let inv = [v(&[-1, 0, 0]), v(&[0, -1, 0]), v(&[0, 0, 1])];
    let inv = Automorphism::from_vectors(&p, &inv, &inv).expect("in range");
    p.add_automorphism("inv", inv).expect("inversion is an automorphism");
    let swap = [v(&[0, 1, 0]), v(&[1, 0, 0]), v(&[0, 0, -1])];
    let swap = Automorphism::from_vectors(&p, &swap, &swap).expect("in range");
    p.add_automorphism("swap", swap).expect("swap is an automorphism");
    p
}

/// The infinite cyclic group `<a>` (as `n = 1`, `r = t = 0`, with `c`
/// present but unused) with the automorphism `psi: a -> a^-1`.
pub fn integers() -> MalcevPresentation {
    let mut p = MalcevPresentation::builder(1, 0, 0)
        .build()
        .expect("Z is well formed");
    let psi = [v(&[-1, 0]), v(&[0, -1])];
    let psi = Automorphism::from_vectors(&p, &psi, &psi).expect("in range");
    p.add_automorphism("psi", psi).expect("negation is an automorphism");
    p
}

/// Infinite dihedral group `Z ⋊ C2` over `H = <a>`, transversal `{1, s}`,
/// `s a s^-1 = a^-1`, `s^2 = 1`.
pub fn infinite_dihedral() -> ExtensionPresentation {
    let base = MalcevPresentation::builder(1, 0, 0)
        .build()
        .expect("Z is well formed");
    let flip = [v(&[-1, 0]), v(&[0, -1])];
    let flip = Automorphism::from_vectors(&base, &flip, &flip).expect("in range");
    let one = NormalForm::identity(&base);
    ExtensionPresentation::new(
        base.clone(),
        vec![Automorphism::identity(&base), flip],
        vec![vec![(one.clone(), 0), (one.clone(), 1)], vec![(one.clone(), 1), (one.clone(), 0)]],
        vec![(one.clone(), 0), (one, 1)],
        Some(vec!["t0".into(), "s".into()]),
    )
    .expect("dihedral tables are consistent")
}

/// `Heisenberg ⋊ C2` with the generator of `C2` acting by `a_i -> a_i^-1`
/// (and hence fixing `c`), transversal `{1, s}`, `s^2 = 1`.
pub fn heisenberg_c2() -> ExtensionPresentation {
    let base = MalcevPresentation::builder(2, 0, 0)
        .alpha(1, 2, 0, -1)
        .names(["a1", "a2", "c"].map(String::from).to_vec())
        .build()
        .expect("Heisenberg group is well formed");
    let inv = [v(&[-1, 0, 0]), v(&[0, -1, 0]), v(&[0, 0, 1])];
    let inv = Automorphism::from_vectors(&base, &inv, &inv).expect("in range");
    let one = NormalForm::identity(&base);
    ExtensionPresentation::new(
        base.clone(),
        vec![Automorphism::identity(&base), inv],
        vec![vec![(one.clone(), 0), (one.clone(), 1)], vec![(one.clone(), 1), (one.clone(), 0)]],
        vec![(one.clone(), 0), (one, 1)],
        Some(vec!["t0".into(), "s".into()]),
    )
    .expect("semidirect tables are consistent")
}

/// Looks up a built-in Mal'cev presentation by name.
pub fn group(name: &str) -> Option<MalcevPresentation> {
    match name {
        "example31" => Some(example31()),
        "heisenberg" => Some(heisenberg()),
        "integers" | "z" => Some(integers()),
        _ => None,
    }
}

pub fn extension(name: &str) -> Option<ExtensionPresentation> {
    match name {
        "dihedral" | "dinf" => Some(infinite_dihedral()),
        "heisenberg_c2" => Some(heisenberg_c2()),
        _ => None,
    }
}

pub const GROUP_NAMES: &[&str] = &["example31", "heisenberg", "integers"];
pub const EXTENSION_NAMES: &[&str] = &["dihedral", "heisenberg_c2"];

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{MalcevError, MalcevPresentation, NormalForm};
use crate::json_int::{from_json_vec, to_json_vec, JsonInt};

/// An automorphism given by the images of all Mal'cev generators, together
/// with the images under its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    images: Vec<NormalForm>,
    inverse_images: Vec<NormalForm>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutomorphismFile {
    pub images: Vec<Vec<JsonInt>>,
    pub inverse_images: Vec<Vec<JsonInt>>,
}

impl Automorphism {
    pub fn new(images: Vec<NormalForm>, inverse_images: Vec<NormalForm>) -> Self {
        Automorphism {
            images,
            inverse_images,
        }
    }

    pub fn identity(p: &MalcevPresentation) -> Self {
        let images: Vec<NormalForm> = (0..p.generator_count())
            .map(|g| NormalForm::generator(p, g))
            .collect();
        Automorphism {
            inverse_images: images.clone(),
            images,
        }
    }

    /// Builds an automorphism from the images of the non-central generators
    /// and of the central ones, given as exponent vectors; inverse likewise.
    pub fn from_vectors(
        p: &MalcevPresentation,
        images: &[Vec<BigInt>],
        inverse_images: &[Vec<BigInt>],
    ) -> Result<Self, MalcevError> {
        let conv = |vs: &[Vec<BigInt>]| -> Result<Vec<NormalForm>, MalcevError> {
            vs.iter().map(|v| NormalForm::from_vec(p, v)).collect()
        };
        Ok(Automorphism {
            images: conv(images)?,
            inverse_images: conv(inverse_images)?,
        })
    }

    pub fn from_file(p: &MalcevPresentation, f: &AutomorphismFile) -> Result<Self, MalcevError> {
        let images: Vec<Vec<BigInt>> = f.images.iter().map(|v| from_json_vec(v)).collect();
        let inverse: Vec<Vec<BigInt>> = f.inverse_images.iter().map(|v| from_json_vec(v)).collect();
        Self::from_vectors(p, &images, &inverse)
    }

    pub fn to_file(&self) -> AutomorphismFile {
        AutomorphismFile {
            images: self.images.iter().map(|u| to_json_vec(&u.to_vec())).collect(),
            inverse_images: self
                .inverse_images
                .iter()
                .map(|u| to_json_vec(&u.to_vec()))
                .collect(),
        }
    }

    pub fn images(&self) -> &[NormalForm] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[NormalForm] {
        &self.inverse_images
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    pub fn is_identity(&self, p: &MalcevPresentation) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(g, img)| *img == NormalForm::generator(p, g))
    }

    /// Image of `u` under this map: the product of generator images raised to
    /// the exponents of `u`, collected.
    pub fn apply(&self, p: &MalcevPresentation, u: &NormalForm) -> NormalForm {
        apply_images(p, &self.images, u)
    }

    pub fn apply_inverse(&self, p: &MalcevPresentation, u: &NormalForm) -> NormalForm {
        apply_images(p, &self.inverse_images, u)
    }

    /// `self` after `other`: `u -> self(other(u))`.
    pub fn compose(&self, p: &MalcevPresentation, other: &Automorphism) -> Automorphism {
        let images = other.images.iter().map(|u| self.apply(p, u)).collect();
        let inverse_images = self
            .inverse_images
            .iter()
            .map(|u| other.apply_inverse(p, u))
            .collect();
        Automorphism {
            images,
            inverse_images,
        }
    }

    /// Checks that both maps respect every defining relation, fix the
    /// commutator subgroup setwise, and are mutually inverse on generators.
    pub fn validate(&self, p: &MalcevPresentation) -> Result<(), MalcevError> {
        let count = p.generator_count();
        if self.images.len() != count || self.inverse_images.len() != count {
            return Err(MalcevError::InvalidAutomorphism(format!(
                "expected {count} images, got {} and {} inverse images",
                self.images.len(),
                self.inverse_images.len()
            )));
        }
        check_homomorphism(p, &self.images, "images")?;
        check_homomorphism(p, &self.inverse_images, "inverse images")?;
        for g in 0..count {
            let gen = NormalForm::generator(p, g);
            if self.apply(p, &self.apply_inverse(p, &gen)) != gen
                || self.apply_inverse(p, &self.apply(p, &gen)) != gen
            {
                return Err(MalcevError::InvalidAutomorphism(format!(
                    "inverse images do not invert the map on generator {}",
                    p.names()[g]
                )));
            }
        }
        Ok(())
    }
}

fn apply_images(p: &MalcevPresentation, images: &[NormalForm], u: &NormalForm) -> NormalForm {
    let powers: Vec<NormalForm> = u
        .syllables()
        .map(|(g, e)| p.power(&images[g], e))
        .collect();
    p.product(powers.iter())
}

/// The images must satisfy every relation of the presentation, which is what
/// makes the substitution a well-defined endomorphism.
fn check_homomorphism(
    p: &MalcevPresentation,
    images: &[NormalForm],
    label: &str,
) -> Result<(), MalcevError> {
    let g_len = p.noncentral_len();
    let fail = |msg: String| Err(MalcevError::InvalidAutomorphism(format!("{label}: {msg}")));
    for m in 0..=p.t() {
        if !images[g_len + m].is_central() {
            return fail(format!(
                "image of {} is not central",
                p.names()[g_len + m]
            ));
        }
    }
    let central_image = |z: &[BigInt]| -> NormalForm {
        let powers: Vec<NormalForm> = z
            .iter()
            .enumerate()
            .map(|(m, e)| p.power(&images[g_len + m], e))
            .collect();
        p.product(powers.iter())
    };
    // g_y g_x = g_x g_y swap(x, y)
    for x in 0..g_len {
        for y in (x + 1)..g_len {
            let lhs = p.multiply(&images[y], &images[x]);
            let rhs = p.product([
                &images[x],
                &images[y],
                &central_image(p.swap_cost(x, y)),
            ]);
            if lhs != rhs {
                return fail(format!(
                    "commutation relation between {} and {} fails",
                    p.names()[x],
                    p.names()[y]
                ));
            }
        }
    }
    for i in 0..p.r() {
        let lhs = p.power(&images[p.n() + i], &p.l()[i]);
        if lhs != central_image(p.eta(i)) {
            return fail(format!("power relation of {} fails", p.names()[p.n() + i]));
        }
    }
    for m in 1..=p.t() {
        if !p.power(&images[g_len + m], &p.k()[m - 1]).is_identity() {
            return fail(format!("order of {} not respected", p.names()[g_len + m]));
        }
    }
    Ok(())
}

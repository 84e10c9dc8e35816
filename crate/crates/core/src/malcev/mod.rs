//! Exact arithmetic in class-2 nilpotent groups given by Mal'cev data.

mod automorphism;
mod collect;
mod normal_form;
mod presentation;

pub use automorphism::{Automorphism, AutomorphismFile};
pub use normal_form::NormalForm;
pub use presentation::{
    default_names, GenKind, MalcevPresentation, PresentationBuilder, PresentationFile,
};

pub(crate) use collect::Collector;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MalcevError {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("non-positive order: {0}")]
    NonPositiveOrder(String),
    #[error("structure constants are inconsistent: (uv)w != u(vw) for u = {u:?}, v = {v:?}, w = {w:?}")]
    AssociativityFailure {
        u: Vec<BigInt>,
        v: Vec<BigInt>,
        w: Vec<BigInt>,
    },
    #[error("u * u^-1 is not the identity for u = {u:?}")]
    InverseFailure { u: Vec<BigInt> },
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("malformed presentation document: {0}")]
    Json(String),
}

#[cfg(test)]
mod tests;

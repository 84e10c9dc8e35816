//! Symbolic collection: every variable becomes a generic normal-form block
//! with integer unknowns as exponents, the word is collected with exponents
//! kept as expressions, and equating them to zero yields an integer system.

mod collect;
pub mod expr;
mod zsystem;

pub use collect::{
    apply_automorphism_symbolic, symbolic_collect, Reduction, SymbolicElement,
    SymbolicNormalForm,
};
pub use expr::{AffineForm, FloorTerm, QuadExpr};
pub use zsystem::{build_zsystem, CongFile, ExprFile, LinFile, ZSystem, ZSystemFile};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("no value for integer variable #{0}")]
    UnassignedVariable(usize),
    #[error("malformed integer system: {0}")]
    Malformed(String),
}

/// Convenience: collect, then build the system.
pub fn reduce(
    eq: &crate::equation::EquationWord,
    p: &crate::malcev::MalcevPresentation,
) -> (Reduction, ZSystem) {
    let red = symbolic_collect(eq, p);
    let sys = build_zsystem(&red);
    (red, sys)
}

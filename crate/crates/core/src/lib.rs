//! Deciding single equations in class-2 nilpotent groups with virtually
//! cyclic commutator subgroup, and in finite extensions of such groups.
//!
//! The pipeline: [`malcev`] arithmetic, [`equation`] words, [`symbolic`]
//! collection into an integer system, [`solver`] for that system, and
//! [`extension`] for reducing an equation in a finite extension to twisted
//! equations in the base group.

pub mod catalog;
pub mod equation;
pub mod extension;
pub mod fuzz;
pub mod json_int;
pub mod malcev;
pub mod oracle;
pub mod pipeline;
pub mod report;
pub mod solver;
pub mod symbolic;

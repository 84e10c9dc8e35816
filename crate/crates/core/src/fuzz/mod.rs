//! Random equations and the differential harness comparing the solver with
//! the brute-force oracle.

mod gen;
mod harness;

pub use gen::{random_constant, random_equation, random_extension_equation, GenParams};
pub use harness::{case_input, fuzz_corpus, replay_line, run_case, CaseOutcome, FuzzConfig, FuzzSummary, Target};

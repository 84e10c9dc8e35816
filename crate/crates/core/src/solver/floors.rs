use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::SolverError;
use crate::symbolic::{AffineForm, FloorTerm, QuadExpr, ZSystem};

/// One disjunct of the floor split: a floor-free system over the original
/// variables followed by one quotient variable per distinct floor term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloorBranch {
    pub residues: Vec<BigInt>,
    pub system: ZSystem,
}

/// Replaces every distinct `⌊e/γ⌋` by a fresh `Q` and, for each choice of
/// residues `R ∈ [0, γ)`, adds `e - γQ - R = 0`. The union of the branches'
/// solution sets, projected to the original variables, is the original
/// solution set.
pub fn eliminate_floors(sys: &ZSystem, branch_limit: u64) -> Result<Vec<FloorBranch>, SolverError> {
    let mut floors: BTreeSet<FloorTerm> = BTreeSet::new();
    for q in sys.quad_eqs.iter().chain(sys.quad_congs.iter().map(|(q, _)| q)) {
        floors.extend(q.floors().keys().cloned());
    }
    if floors.is_empty() {
        return Ok(vec![FloorBranch {
            residues: Vec::new(),
            system: sys.clone(),
        }]);
    }
    let floors: Vec<FloorTerm> = floors.into_iter().collect();
    let mut count: u64 = 1;
    for f in &floors {
        count = f
            .denominator
            .to_u64()
            .and_then(|g| count.checked_mul(g))
            .filter(|&c| c <= branch_limit)
            .ok_or(SolverError::BranchLimitExceeded(branch_limit))?;
    }
    let base = sys.variables.len();
    let mut variables = sys.variables.clone();
    for i in 0..floors.len() {
        variables.push(format!("_q{i}"));
    }
    let replace = |q: &QuadExpr| {
        q.map_floors(|f| {
            let i = floors.binary_search(f).expect("collected above");
            AffineForm::var(base + i)
        })
    };
    let mut template = ZSystem::new(variables);
    template.linear_eqs = sys.linear_eqs.clone();
    template.linear_congs = sys.linear_congs.clone();
    for q in &sys.quad_eqs {
        template.push_quad_eq(replace(q));
    }
    for (q, m) in &sys.quad_congs {
        template.push_quad_cong(replace(q), m.clone());
    }

    let mut branches = Vec::with_capacity(count as usize);
    let mut residues = vec![BigInt::zero(); floors.len()];
    loop {
        let mut branch = template.clone();
        for (i, (f, r)) in floors.iter().zip(&residues).enumerate() {
            // e - γ Q - R = 0
            let mut row = f.numerator.clone();
            row.add_term(base + i, &-&f.denominator);
            row.add_const(&-r);
            branch.push_linear_eq(row);
        }
        branches.push(FloorBranch {
            residues: residues.clone(),
            system: branch,
        });
        // odometer, last floor fastest
        let mut i = floors.len();
        loop {
            if i == 0 {
                return Ok(branches);
            }
            i -= 1;
            residues[i] += 1;
            if residues[i] < floors[i].denominator {
                break;
            }
            residues[i] = BigInt::zero();
        }
    }
}

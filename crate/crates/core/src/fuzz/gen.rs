use rand::Rng;

use crate::extension::ExtensionPresentation;
use crate::malcev::MalcevPresentation;

/// Shape of randomly generated equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub max_vars: usize,
    pub max_occurrences: usize,
    /// Constant exponents are drawn from `[-const_bound, const_bound]`.
    pub const_bound: i64,
    /// Allow twisted occurrences when the group registers automorphisms.
    pub twists: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_vars: 2,
            max_occurrences: 3,
            const_bound: 2,
            twists: true,
        }
    }
}

const VAR_NAMES: [&str; 4] = ["X", "Y", "Z", "W"];

/// A random constant word over the generators of `p`, or empty.
pub fn random_constant<R: Rng + ?Sized>(rng: &mut R, p: &MalcevPresentation, bound: i64) -> Vec<String> {
    let mut out = Vec::new();
    let len = rng.gen_range(0..=2);
    for _ in 0..len {
        let g = rng.gen_range(0..p.generator_count());
        let e = rng.gen_range(-bound..=bound);
        if e == 0 {
            continue;
        }
        let name = &p.names()[g];
        out.push(if e == 1 { name.clone() } else { format!("{name}^{e}") });
    }
    out
}

/// `max_occurrences == 0` yields constant equations.
fn occurrence_count<R: Rng + ?Sized>(rng: &mut R, params: &GenParams) -> usize {
    match params.max_occurrences {
        0 => 0,
        m => rng.gen_range(1..=m),
    }
}

fn finish(parts: Vec<String>) -> String {
    if parts.is_empty() {
        "1 = 1".to_string()
    } else {
        format!("{} = 1", parts.join(" "))
    }
}

/// Random equation text in the DSL: at least one occurrence unless
/// `max_occurrences` is zero, at most `max_occurrences`, over at most
/// `max_vars` distinct variables.
pub fn random_equation<R: Rng + ?Sized>(rng: &mut R, p: &MalcevPresentation, params: &GenParams) -> String {
    let occurrences = occurrence_count(rng, params);
    let nvars = params.max_vars.clamp(1, VAR_NAMES.len());
    let auts = if params.twists { p.automorphisms().len() } else { 0 };
    let mut parts = random_constant(rng, p, params.const_bound);
    for _ in 0..occurrences {
        let var = VAR_NAMES[rng.gen_range(0..nvars)];
        let mut s = String::new();
        if auts > 0 && rng.gen_bool(0.3) {
            s.push_str(&p.automorphisms()[rng.gen_range(0..auts)].0);
            s.push(':');
        }
        s.push_str(var);
        if rng.gen_bool(0.5) {
            s.push_str("^-1");
        }
        parts.push(s);
        parts.extend(random_constant(rng, p, params.const_bound));
    }
    finish(parts)
}

/// Random equation text over a finite extension: constants mix base
/// generators with transversal names, occurrences are untwisted.
pub fn random_extension_equation<R: Rng + ?Sized>(
    rng: &mut R,
    ext: &ExtensionPresentation,
    params: &GenParams,
) -> String {
    let occurrences = occurrence_count(rng, params);
    let nvars = params.max_vars.clamp(1, VAR_NAMES.len());
    let constant = |rng: &mut R| {
        let mut parts = random_constant(rng, ext.base(), params.const_bound);
        if ext.f() > 1 && rng.gen_bool(0.5) {
            let tau = rng.gen_range(1..ext.f());
            parts.push(ext.transversal_names()[tau].clone());
        }
        parts
    };
    let mut parts = constant(rng);
    for _ in 0..occurrences {
        let mut s = VAR_NAMES[rng.gen_range(0..nvars)].to_string();
        if rng.gen_bool(0.5) {
            s.push_str("^-1");
        }
        parts.push(s);
        parts.extend(constant(rng));
    }
    finish(parts)
}

//! Equations over a Mal'cev-presented group: syntax, parsing, normalization
//! and evaluation at candidate solutions.

pub mod dsl;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::malcev::{Collector, MalcevPresentation, NormalForm};
use dsl::Item;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("unknown symbol `{token}` at token {pos}")]
    UnknownSymbol { token: String, pos: usize },
    #[error("malformed exponent in `{token}` at token {pos}")]
    MalformedExponent { token: String, pos: usize },
    #[error("equation must end with `= 1`")]
    MissingEquals,
    #[error("unknown automorphism `{name}` at token {pos}")]
    UnknownAutomorphism { name: String, pos: usize },
    #[error("no value for variable {0}")]
    UnassignedVariable(String),
    #[error("malformed equation: {0}")]
    Malformed(String),
}

/// One variable occurrence `X^ε`, or `(X θ)^ε` when twisted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Occurrence {
    /// Ordinal of the variable in [`EquationWord::variables`].
    pub var: usize,
    /// `+1` or `-1`.
    pub epsilon: i8,
    /// Index of the automorphism in the presentation's registry.
    pub twist: Option<usize>,
}

/// `ω_0 X_1^{ε_1} ω_1 X_2^{ε_2} ⋯ X_N^{ε_N} ω_N = 1` with every `ω_z` in
/// normal form. Variables may repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationWord {
    variables: Vec<String>,
    constants: Vec<NormalForm>,
    occurrences: Vec<Occurrence>,
}

impl EquationWord {
    /// Checks the shape: `N + 1` constants for `N` occurrences, variable and
    /// twist indices in range, signs `±1`.
    pub fn new(
        p: &MalcevPresentation,
        variables: Vec<String>,
        constants: Vec<NormalForm>,
        occurrences: Vec<Occurrence>,
    ) -> Result<Self, EquationError> {
        if constants.len() != occurrences.len() + 1 {
            return Err(EquationError::Malformed(format!(
                "{} constants for {} occurrences",
                constants.len(),
                occurrences.len()
            )));
        }
        for (i, v) in variables.iter().enumerate() {
            if !dsl::is_variable_name(v) || variables[..i].contains(v) {
                return Err(EquationError::Malformed(format!("bad variable name {v}")));
            }
        }
        for o in &occurrences {
            if o.var >= variables.len()
                || o.epsilon.abs() != 1
                || o.twist.is_some_and(|t| t >= p.automorphisms().len())
            {
                return Err(EquationError::Malformed(format!("bad occurrence {o:?}")));
            }
        }
        for c in &constants {
            if c.to_vec().len() != p.generator_count() {
                return Err(EquationError::Malformed("constant of wrong shape".into()));
            }
        }
        Ok(EquationWord {
            variables,
            constants,
            occurrences,
        })
    }

    /// Parses the whitespace-separated DSL, e.g. `X b a1 c X a2 c^-3 a1 X = 1`.
    /// Adjacent constants are collected into one normal form.
    pub fn parse(text: &str, p: &MalcevPresentation) -> Result<Self, EquationError> {
        let mut variables: Vec<String> = Vec::new();
        let mut constants = Vec::new();
        let mut occurrences = Vec::new();
        let mut current = Collector::new(p);
        for pi in dsl::tokenize(text)? {
            match pi.item {
                Item::One => {}
                Item::Symbol { name, exp } => {
                    let g = p.generator_index(&name).ok_or(EquationError::UnknownSymbol {
                        token: name,
                        pos: pi.pos,
                    })?;
                    current.push(g, &exp);
                }
                Item::Var { name, power, twist } => {
                    let twist = match twist {
                        None => None,
                        Some(t) => Some(
                            p.automorphism(&t)
                                .ok_or(EquationError::UnknownAutomorphism {
                                    name: t,
                                    pos: pi.pos,
                                })?
                                .0,
                        ),
                    };
                    let var = match variables.iter().position(|v| *v == name) {
                        Some(i) => i,
                        None => {
                            variables.push(name);
                            variables.len() - 1
                        }
                    };
                    let epsilon = if power < 0 { -1 } else { 1 };
                    for _ in 0..power.abs() {
                        let done = std::mem::replace(&mut current, Collector::new(p));
                        constants.push(done.finish());
                        occurrences.push(Occurrence {
                            var,
                            epsilon,
                            twist,
                        });
                    }
                }
            }
        }
        constants.push(current.finish());
        Ok(EquationWord {
            variables,
            constants,
            occurrences,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// `ω_0, .., ω_N`.
    pub fn constants(&self) -> &[NormalForm] {
        &self.constants
    }

    pub fn occurrences(&self) -> &[Occurrence] {
        &self.occurrences
    }

    pub fn is_twisted(&self) -> bool {
        self.occurrences.iter().any(|o| o.twist.is_some())
    }

    /// Moves the central part of every constant to the last one, which is
    /// sound because central elements commute with everything.
    pub fn normalize(&self, p: &MalcevPresentation) -> EquationWord {
        let last = self.constants.len() - 1;
        let mut central = NormalForm::identity(p);
        let mut constants = Vec::with_capacity(self.constants.len());
        for (z, w) in self.constants.iter().enumerate() {
            if z == last {
                constants.push(p.multiply(w, &central));
            } else {
                let mut head = w.clone();
                let mut tail = NormalForm::identity(p);
                tail.central = std::mem::replace(&mut head.central, vec![0.into(); p.t() + 1]);
                central = p.multiply(&central, &tail);
                constants.push(head);
            }
        }
        EquationWord {
            variables: self.variables.clone(),
            constants,
            occurrences: self.occurrences.clone(),
        }
    }

    /// Value of the left-hand side with variable `i` set to `values[i]`.
    pub fn evaluate(
        &self,
        p: &MalcevPresentation,
        values: &[NormalForm],
    ) -> Result<NormalForm, EquationError> {
        if values.len() < self.variables.len() {
            return Err(EquationError::UnassignedVariable(
                self.variables[values.len()].clone(),
            ));
        }
        let mut col = Collector::new(p);
        col.push_normal_form(&self.constants[0]);
        for (o, w) in self.occurrences.iter().zip(&self.constants[1..]) {
            let mut x = values[o.var].clone();
            if let Some(t) = o.twist {
                x = p.automorphism_at(t).apply(p, &x);
            }
            if o.epsilon < 0 {
                x = p.invert(&x);
            }
            col.push_normal_form(&x);
            col.push_normal_form(w);
        }
        Ok(col.finish())
    }

    /// Like [`evaluate`](Self::evaluate) with values looked up by name.
    pub fn substitute(
        &self,
        p: &MalcevPresentation,
        assignment: &BTreeMap<String, NormalForm>,
    ) -> Result<NormalForm, EquationError> {
        let values = self
            .variables
            .iter()
            .map(|v| {
                assignment
                    .get(v)
                    .cloned()
                    .ok_or_else(|| EquationError::UnassignedVariable(v.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.evaluate(p, &values)
    }

    /// The word `self · other`, identifying variables with equal names.
    pub fn concat(&self, p: &MalcevPresentation, other: &EquationWord) -> EquationWord {
        let mut variables = self.variables.clone();
        let remap: Vec<usize> = other
            .variables
            .iter()
            .map(|v| match variables.iter().position(|w| w == v) {
                Some(i) => i,
                None => {
                    variables.push(v.clone());
                    variables.len() - 1
                }
            })
            .collect();
        let mut constants = self.constants.clone();
        let joint = p.multiply(constants.last().expect("nonempty"), &other.constants[0]);
        *constants.last_mut().expect("nonempty") = joint;
        constants.extend(other.constants[1..].iter().cloned());
        let mut occurrences = self.occurrences.clone();
        occurrences.extend(other.occurrences.iter().map(|o| Occurrence {
            var: remap[o.var],
            ..*o
        }));
        EquationWord {
            variables,
            constants,
            occurrences,
        }
    }

    /// Renders in the DSL accepted by [`parse`](Self::parse).
    pub fn to_dsl(&self, p: &MalcevPresentation) -> String {
        let mut parts = Vec::new();
        let push_const = |w: &NormalForm, parts: &mut Vec<String>| {
            if !w.is_identity() {
                parts.push(w.to_word(p));
            }
        };
        push_const(&self.constants[0], &mut parts);
        for (o, w) in self.occurrences.iter().zip(&self.constants[1..]) {
            let mut s = String::new();
            if let Some(t) = o.twist {
                s.push_str(p.automorphism_name(t));
                s.push(':');
            }
            s.push_str(&self.variables[o.var]);
            if o.epsilon < 0 {
                s.push_str("^-1");
            }
            parts.push(s);
            push_const(w, &mut parts);
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        format!("{} = 1", parts.join(" "))
    }

    pub fn display<'a>(&'a self, p: &'a MalcevPresentation) -> impl fmt::Display + 'a {
        DisplayEq { eq: self, p }
    }
}

struct DisplayEq<'a> {
    eq: &'a EquationWord,
    p: &'a MalcevPresentation,
}

impl fmt::Display for DisplayEq<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.eq.to_dsl(self.p))
    }
}

/// An equation file: a `group:` (or `extension:`) header line naming a
/// presentation file, followed by one equation per line. Blank lines and
/// lines starting with `#` are skipped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationFile {
    pub group: Option<String>,
    pub extension: Option<String>,
    pub equations: Vec<String>,
}

impl EquationFile {
    pub fn parse(text: &str) -> Result<Self, EquationError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| EquationError::Malformed("empty equation file".into()))?;
        let (key, path) = header
            .split_once(':')
            .ok_or_else(|| EquationError::Malformed(format!("bad header {header:?}")))?;
        let path = Some(path.trim().to_string());
        let (group, extension) = match key.trim() {
            "group" => (path, None),
            "extension" => (None, path),
            other => {
                return Err(EquationError::Malformed(format!(
                    "header must be `group:` or `extension:`, got {other:?}"
                )))
            }
        };
        Ok(EquationFile {
            group,
            extension,
            equations: lines.map(str::to_string).collect(),
        })
    }
}

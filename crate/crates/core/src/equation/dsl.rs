//! Tokenizer shared by the group and extension equation parsers.
//!
//! Tokens are separated by whitespace. `^` binds to the preceding token,
//! either attached (`c^-3`) or as separate tokens (`c ^ -3`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::EquationError;

/// Largest `|k|` accepted in `X^k`; variable powers expand to occurrences.
pub const MAX_VARIABLE_POWER: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    /// Literal identity `1`.
    One,
    /// Lowercase name (generator or transversal element) with exponent.
    Symbol { name: String, exp: BigInt },
    /// Variable occurrence repeated `|power|` times, inverted when negative,
    /// optionally twisted by a named automorphism.
    Var {
        name: String,
        power: i64,
        twist: Option<String>,
    },
}

/// An item together with its 1-based token position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Positioned {
    pub item: Item,
    pub pos: usize,
}

pub fn is_variable_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_symbol_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits `text` into items, checking the trailing `= 1`.
pub fn tokenize(text: &str) -> Result<Vec<Positioned>, EquationError> {
    let raw: Vec<&str> = text.split_whitespace().collect();
    let eq = raw.iter().position(|t| *t == "=");
    let eq = match eq {
        Some(i) if i + 2 == raw.len() && raw[i + 1] == "1" => i,
        _ => return Err(EquationError::MissingEquals),
    };
    // Re-attach detached exponents: `a ^ 2` and `a ^2` become `a^2`.
    let mut joined: Vec<(String, usize)> = Vec::new();
    let mut i = 0;
    while i < eq {
        let tok = raw[i];
        let pos = i + 1;
        if tok.starts_with('^') {
            let Some(last) = joined.last_mut() else {
                return Err(EquationError::MalformedExponent {
                    token: tok.to_string(),
                    pos,
                });
            };
            if last.0.contains('^') {
                return Err(EquationError::MalformedExponent {
                    token: tok.to_string(),
                    pos,
                });
            }
            if tok == "^" {
                if i + 1 >= eq {
                    return Err(EquationError::MalformedExponent {
                        token: tok.to_string(),
                        pos,
                    });
                }
                last.0.push('^');
                last.0.push_str(raw[i + 1]);
                i += 2;
            } else {
                last.0.push_str(tok);
                i += 1;
            }
            continue;
        }
        joined.push((tok.to_string(), pos));
        i += 1;
    }
    if joined.is_empty() {
        return Err(EquationError::MissingEquals);
    }
    joined
        .into_iter()
        .map(|(tok, pos)| parse_item(&tok, pos).map(|item| Positioned { item, pos }))
        .collect()
}

fn parse_item(tok: &str, pos: usize) -> Result<Item, EquationError> {
    let malformed = || EquationError::MalformedExponent {
        token: tok.to_string(),
        pos,
    };
    let (base, exp) = match tok.split_once('^') {
        Some((b, e)) => {
            let e = BigInt::from_str(e).map_err(|_| malformed())?;
            (b, Some(e))
        }
        None => (tok, None),
    };
    if base == "1" {
        return Ok(Item::One);
    }
    let (twist, var) = match base.split_once(':') {
        Some((aut, var)) => (Some(aut), var),
        None => (None, base),
    };
    if is_variable_name(var) && twist.map_or(true, is_symbol_name) {
        let power = match exp {
            None => 1,
            Some(e) => match e.to_i64() {
                Some(k) if k != 0 && k.abs() <= MAX_VARIABLE_POWER => k,
                _ => return Err(malformed()),
            },
        };
        return Ok(Item::Var {
            name: var.to_string(),
            power,
            twist: twist.map(str::to_string),
        });
    }
    if twist.is_none() && is_symbol_name(base) {
        return Ok(Item::Symbol {
            name: base.to_string(),
            exp: exp.unwrap_or_else(|| BigInt::from(1)),
        });
    }
    Err(EquationError::UnknownSymbol {
        token: base.to_string(),
        pos,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detached_and_attached_exponents_agree() {
        let a = tokenize("c^-3 X^2 = 1").unwrap();
        let b = tokenize("c ^ -3 X ^2 = 1").unwrap();
        let strip = |v: Vec<Positioned>| v.into_iter().map(|p| p.item).collect::<Vec<_>>();
        assert_eq!(strip(a), strip(b));
    }

    #[test]
    fn twisted_variable() {
        let items = tokenize("psi:X^-1 = 1").unwrap();
        assert_eq!(
            items[0].item,
            Item::Var {
                name: "X".into(),
                power: -1,
                twist: Some("psi".into())
            }
        );
    }

    #[test]
    fn missing_equals() {
        assert_eq!(tokenize("X a1"), Err(EquationError::MissingEquals));
        assert_eq!(tokenize("X a1 = 2"), Err(EquationError::MissingEquals));
        assert_eq!(tokenize("= 1"), Err(EquationError::MissingEquals));
    }

    #[test]
    fn bad_exponent() {
        assert!(matches!(
            tokenize("a^x = 1"),
            Err(EquationError::MalformedExponent { pos: 1, .. })
        ));
        assert!(matches!(
            tokenize("X^0 = 1"),
            Err(EquationError::MalformedExponent { .. })
        ));
    }
}

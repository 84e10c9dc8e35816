use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::collect::Reduction;
use super::expr::{AffineForm, FloorTerm, QuadExpr};
use super::SymbolicError;
use crate::json_int::JsonInt;

/// Integer system: linear equations, linear congruences, quadratic equations
/// (possibly with floor terms) and quadratic congruences, all `= 0` or
/// `≡ 0`. Every variable mentioned is registered in `variables`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZSystem {
    pub variables: Vec<String>,
    pub linear_eqs: Vec<AffineForm>,
    pub linear_congs: Vec<(AffineForm, BigInt)>,
    pub quad_eqs: Vec<QuadExpr>,
    pub quad_congs: Vec<(QuadExpr, BigInt)>,
}

/// Equates every exponent of the collected word to zero. Central rows are
/// multiplied through by the common denominator, and so are their moduli.
/// Rows that vanish identically are dropped.
pub fn build_zsystem(red: &Reduction) -> ZSystem {
    let snf = &red.normal_form;
    let mut sys = ZSystem {
        variables: red.variables.clone(),
        ..Default::default()
    };
    for f in &snf.a {
        sys.push_linear_eq(f.clone());
    }
    for (f, l) in snf.b.iter().zip(&snf.l) {
        sys.push_linear_cong(f.clone(), l.clone());
    }
    for (m, z) in snf.central.iter().enumerate() {
        if m == 0 {
            if z.is_affine() {
                sys.push_linear_eq(z.affine().clone());
            } else {
                sys.quad_eqs.push(z.clone());
            }
        } else {
            let modulus = &snf.k[m - 1] * &snf.denom;
            if z.is_affine() {
                sys.push_linear_cong(z.affine().clone(), modulus);
            } else {
                sys.push_quad_cong(z.clone(), modulus);
            }
        }
    }
    sys
}

impl ZSystem {
    pub fn new(variables: Vec<String>) -> Self {
        ZSystem {
            variables,
            ..Default::default()
        }
    }

    pub fn variable(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn push_linear_eq(&mut self, f: AffineForm) {
        if !f.is_zero() {
            self.linear_eqs.push(f);
        }
    }

    pub fn push_linear_cong(&mut self, f: AffineForm, m: BigInt) {
        let f = f.reduced_mod(&m);
        if !m.is_one() && !f.is_zero() {
            self.linear_congs.push((f, m));
        }
    }

    pub fn push_quad_eq(&mut self, q: QuadExpr) {
        if q.is_affine() {
            self.push_linear_eq(q.affine().clone());
        } else {
            self.quad_eqs.push(q);
        }
    }

    pub fn push_quad_cong(&mut self, q: QuadExpr, m: BigInt) {
        let q = q.reduced_mod(&m);
        if q.is_affine() {
            self.push_linear_cong(q.affine().clone(), m);
        } else if !m.is_one() {
            self.quad_congs.push((q, m));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.linear_eqs.is_empty()
            && self.linear_congs.is_empty()
            && self.quad_eqs.is_empty()
            && self.quad_congs.is_empty()
    }

    pub fn has_floors(&self) -> bool {
        self.quad_eqs.iter().any(QuadExpr::has_floors)
            || self.quad_congs.iter().any(|(q, _)| q.has_floors())
    }

    /// True iff every equation vanishes and every congruence holds at `sigma`.
    pub fn verify(&self, sigma: &[BigInt]) -> Result<bool, SymbolicError> {
        if sigma.len() < self.variables.len() {
            return Err(SymbolicError::UnassignedVariable(sigma.len()));
        }
        for f in &self.linear_eqs {
            if !f.eval(sigma)?.is_zero() {
                return Ok(false);
            }
        }
        for (f, m) in &self.linear_congs {
            if !f.eval(sigma)?.mod_floor(m).is_zero() {
                return Ok(false);
            }
        }
        for q in &self.quad_eqs {
            if !q.eval(sigma)?.is_zero() {
                return Ok(false);
            }
        }
        for (q, m) in &self.quad_congs {
            if !q.eval(sigma)?.mod_floor(m).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Residual of every row at `sigma`, in the order linear equations,
    /// linear congruences, quadratic equations, quadratic congruences;
    /// congruence residuals are reduced into `[0, m)`.
    pub fn residuals(&self, sigma: &[BigInt]) -> Result<Vec<BigInt>, SymbolicError> {
        let mut out = Vec::new();
        for f in &self.linear_eqs {
            out.push(f.eval(sigma)?);
        }
        for (f, m) in &self.linear_congs {
            out.push(f.eval(sigma)?.mod_floor(m));
        }
        for q in &self.quad_eqs {
            out.push(q.eval(sigma)?);
        }
        for (q, m) in &self.quad_congs {
            out.push(q.eval(sigma)?.mod_floor(m));
        }
        Ok(out)
    }

    pub fn to_file(&self) -> ZSystemFile {
        let names = &self.variables;
        ZSystemFile {
            variables: names.clone(),
            linear_eqs: self.linear_eqs.iter().map(|f| ExprFile::affine(f, names)).collect(),
            linear_congs: self
                .linear_congs
                .iter()
                .map(|(f, m)| CongFile {
                    expr: ExprFile::affine(f, names),
                    modulus: m.into(),
                })
                .collect(),
            quad_eqs: self.quad_eqs.iter().map(|q| ExprFile::quad(q, names)).collect(),
            quad_congs: self
                .quad_congs
                .iter()
                .map(|(q, m)| CongFile {
                    expr: ExprFile::quad(q, names),
                    modulus: m.into(),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &ZSystemFile) -> Result<Self, SymbolicError> {
        let names = &file.variables;
        for (i, v) in names.iter().enumerate() {
            if names[..i].contains(v) {
                return Err(SymbolicError::Malformed(format!("duplicate variable {v}")));
            }
        }
        let mut sys = ZSystem::new(names.clone());
        for e in &file.linear_eqs {
            let q = e.to_quad(names)?;
            if !q.is_affine() {
                return Err(SymbolicError::Malformed("nonlinear row in linear_eqs".into()));
            }
            sys.linear_eqs.push(q.affine().clone());
        }
        for c in &file.linear_congs {
            let q = c.expr.to_quad(names)?;
            if !q.is_affine() {
                return Err(SymbolicError::Malformed("nonlinear row in linear_congs".into()));
            }
            sys.linear_congs.push((q.affine().clone(), positive(&c.modulus)?));
        }
        for e in &file.quad_eqs {
            sys.quad_eqs.push(e.to_quad(names)?);
        }
        for c in &file.quad_congs {
            sys.quad_congs
                .push((c.expr.to_quad(names)?, positive(&c.modulus)?));
        }
        Ok(sys)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, SymbolicError> {
        let file: ZSystemFile =
            serde_json::from_str(text).map_err(|e| SymbolicError::Malformed(e.to_string()))?;
        Self::from_file(&file)
    }
}

fn positive(m: &JsonInt) -> Result<BigInt, SymbolicError> {
    if m.0.is_positive() {
        Ok(m.0.clone())
    } else {
        Err(SymbolicError::Malformed(format!("modulus {} must be positive", m.0)))
    }
}

/// Text rendering, one row per line.
impl fmt::Display for ZSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = &self.variables;
        if self.is_empty() {
            return writeln!(f, "(no constraints)");
        }
        for e in &self.linear_eqs {
            writeln!(f, "{} = 0", e.display(names))?;
        }
        for (e, m) in &self.linear_congs {
            writeln!(f, "{} ≡ 0 mod {m}", e.display(names))?;
        }
        for q in &self.quad_eqs {
            writeln!(f, "{} = 0", q.display(names))?;
        }
        for (q, m) in &self.quad_congs {
            writeln!(f, "{} ≡ 0 mod {m}", q.display(names))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZSystemFile {
    pub variables: Vec<String>,
    pub linear_eqs: Vec<ExprFile>,
    pub linear_congs: Vec<CongFile>,
    pub quad_eqs: Vec<ExprFile>,
    pub quad_congs: Vec<CongFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongFile {
    pub expr: ExprFile,
    #[serde(rename = "mod")]
    pub modulus: JsonInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinFile {
    #[serde(rename = "const")]
    pub constant: JsonInt,
    pub lin: Vec<(String, JsonInt)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExprFile {
    #[serde(rename = "const")]
    pub constant: JsonInt,
    pub lin: Vec<(String, JsonInt)>,
    #[serde(default)]
    pub quad: Vec<(String, String, JsonInt)>,
    #[serde(default)]
    pub floors: Vec<(JsonInt, LinFile, JsonInt)>,
}

fn lin_terms(f: &AffineForm, names: &[String]) -> Vec<(String, JsonInt)> {
    f.coeffs()
        .iter()
        .map(|(v, c)| (names[*v].clone(), c.into()))
        .collect()
}

impl ExprFile {
    fn affine(f: &AffineForm, names: &[String]) -> Self {
        ExprFile {
            constant: f.constant_term().into(),
            lin: lin_terms(f, names),
            quad: Vec::new(),
            floors: Vec::new(),
        }
    }

    fn quad(q: &QuadExpr, names: &[String]) -> Self {
        let mut out = Self::affine(q.affine(), names);
        out.quad = q
            .quad()
            .iter()
            .map(|((i, j), c)| (names[*i].clone(), names[*j].clone(), c.into()))
            .collect();
        out.floors = q
            .floors()
            .iter()
            .map(|(fl, c)| {
                (
                    c.into(),
                    LinFile {
                        constant: fl.numerator.constant_term().into(),
                        lin: lin_terms(&fl.numerator, names),
                    },
                    (&fl.denominator).into(),
                )
            })
            .collect();
        out
    }

    fn to_quad(&self, names: &[String]) -> Result<QuadExpr, SymbolicError> {
        let index: BTreeMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let look = |n: &str| {
            index
                .get(n)
                .copied()
                .ok_or_else(|| SymbolicError::Malformed(format!("unregistered variable {n}")))
        };
        let lin = |constant: &JsonInt, terms: &[(String, JsonInt)]| {
            let mut f = AffineForm::constant(constant.0.clone());
            for (n, c) in terms {
                f.add_term(look(n)?, &c.0);
            }
            Ok::<_, SymbolicError>(f)
        };
        let mut q = QuadExpr::from(lin(&self.constant, &self.lin)?);
        for (x, y, c) in &self.quad {
            q.add_quad(look(x)?, look(y)?, &c.0);
        }
        for (c, num, den) in &self.floors {
            if !den.0.is_positive() {
                return Err(SymbolicError::Malformed("floor denominator must be positive".into()));
            }
            q.add_floor(&c.0, FloorTerm::new(lin(&num.constant, &num.lin)?, den.0.clone()));
        }
        Ok(q)
    }
}

impl ZSystem {
    /// Maximum absolute coefficient, a rough size measure for reports.
    pub fn height(&self) -> BigInt {
        let mut h = BigInt::zero();
        let mut see = |c: &BigInt| {
            if c.abs() > h {
                h = c.abs();
            }
        };
        for f in self.linear_eqs.iter().chain(self.linear_congs.iter().map(|(f, _)| f)) {
            see(f.constant_term());
            f.coeffs().values().for_each(&mut see);
        }
        for q in self.quad_eqs.iter().chain(self.quad_congs.iter().map(|(q, _)| q)) {
            see(q.affine().constant_term());
            q.affine().coeffs().values().for_each(&mut see);
            q.quad().values().for_each(&mut see);
        }
        h
    }
}

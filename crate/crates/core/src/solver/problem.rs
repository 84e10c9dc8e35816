//! Floor-free systems under successive elimination, and the per-component
//! decision procedures.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::binary::{solve_binary_in, BinaryOutcome, BinaryQuadratic};
use super::budget::{Budget, Exhausted};
use super::definite::{definite_sign, enumerate_definite, integer_roots};
use super::linear::{reduce_lattice, solve_linear};
use super::numtheory::{lcm, mod_inverse, SMALL_MODULI};
use super::{Certificate, SolverConfig};
use crate::symbolic::{AffineForm, QuadExpr, ZSystem};

pub(crate) enum Outcome {
    /// Values for every variable index below the problem's counter.
    Sat(Vec<BigInt>),
    Unsat(Certificate),
    Unknown(String),
}

/// How to recover an eliminated variable from the ones still present.
#[derive(Clone, Debug)]
enum Step {
    /// `var = num / den`, exact.
    Define {
        var: usize,
        num: QuadExpr,
        den: BigInt,
    },
    /// `var = (-(rest / g) · inv) mod modulus`, the least solution of
    /// `κ var + rest ≡ 0` after dividing by `g = gcd(κ, m)`.
    Residue {
        var: usize,
        rest: QuadExpr,
        g: BigInt,
        inv: BigInt,
        modulus: BigInt,
    },
}

/// Rows `eqs = 0` and `congs ≡ 0`. Variable indices are never reused:
/// fresh parameters are numbered from `nvars` upwards.
#[derive(Clone, Debug)]
struct Problem {
    nvars: usize,
    eqs: Vec<QuadExpr>,
    congs: Vec<(QuadExpr, BigInt)>,
    steps: Vec<Step>,
}

enum Stop {
    Unsat(Certificate),
    Exhausted(Exhausted),
}

impl From<Exhausted> for Stop {
    fn from(e: Exhausted) -> Self {
        Stop::Exhausted(e)
    }
}

/// Residue tuples scanned by the congruence layers.
const RESIDUE_LIMIT: u64 = 200_000;

pub(crate) fn solve_system(sys: &ZSystem, cfg: &SolverConfig, budget: &Budget) -> Outcome {
    if sys.has_floors() {
        return Outcome::Unknown("floor terms must be eliminated first".into());
    }
    let mut p = Problem {
        nvars: sys.variables.len(),
        eqs: Vec::new(),
        congs: Vec::new(),
        steps: Vec::new(),
    };
    p.eqs.extend(sys.linear_eqs.iter().cloned().map(QuadExpr::from));
    p.eqs.extend(sys.quad_eqs.iter().cloned());
    p.congs.extend(
        sys.linear_congs
            .iter()
            .map(|(f, m)| (QuadExpr::from(f.clone()), m.clone())),
    );
    p.congs.extend(sys.quad_congs.iter().cloned());
    match solve_problem(p, cfg, budget) {
        Ok(o) => o,
        Err(e) => Outcome::Unknown(e.reason().into()),
    }
}

fn solve_problem(mut p: Problem, cfg: &SolverConfig, budget: &Budget) -> Result<Outcome, Exhausted> {
    match p.reduce(budget) {
        Ok(()) => {}
        Err(Stop::Unsat(c)) => return Ok(Outcome::Unsat(c)),
        Err(Stop::Exhausted(e)) => return Err(e),
    }
    let mut values = vec![BigInt::zero(); p.nvars];
    let mut unknown = None;
    for comp in p.components() {
        match comp.solve(cfg, budget)? {
            Outcome::Sat(v) => {
                for &x in &comp.vars {
                    values[x] = v[x].clone();
                }
            }
            Outcome::Unsat(c) => return Ok(Outcome::Unsat(c)),
            Outcome::Unknown(r) => {
                unknown.get_or_insert(r);
            }
        }
    }
    if let Some(r) = unknown {
        return Ok(Outcome::Unknown(r));
    }
    p.reconstruct(&mut values);
    Ok(Outcome::Sat(values))
}

/// Content of the non-constant part of `q`.
fn variable_content(q: &QuadExpr) -> BigInt {
    let mut g = BigInt::zero();
    for c in q.quad().values().chain(q.affine().coeffs().values()) {
        g = g.gcd(c);
    }
    g
}

fn without_var(q: &QuadExpr, v: usize) -> QuadExpr {
    q.substitute(v, &AffineForm::zero())
}

impl Problem {
    fn fresh(&mut self) -> usize {
        self.nvars += 1;
        self.nvars - 1
    }

    /// Runs the linear layer and single-occurrence elimination to a fixed
    /// point, checking constant rows along the way.
    fn reduce(&mut self, budget: &Budget) -> Result<(), Stop> {
        loop {
            budget.tick()?;
            self.normalize()?;
            if self.linear_layer()? {
                continue;
            }
            if !self.eliminate_single_occurrence() {
                return Ok(());
            }
        }
    }

    fn normalize(&mut self) -> Result<(), Stop> {
        let mut eqs = Vec::with_capacity(self.eqs.len());
        for q in self.eqs.drain(..) {
            if q.is_zero() {
                continue;
            }
            let g = variable_content(&q);
            let c = q.affine().constant_term();
            if g.is_zero() {
                return Err(Stop::Unsat(Certificate::LinearInfeasible));
            }
            if !(c % &g).is_zero() {
                return Err(Stop::Unsat(if q.is_affine() {
                    Certificate::LinearInfeasible
                } else {
                    Certificate::CongruenceObstruction(g.abs())
                }));
            }
            eqs.push(q);
        }
        self.eqs = eqs;
        let mut congs = Vec::with_capacity(self.congs.len());
        for (q, m) in self.congs.drain(..) {
            let q = q.reduced_mod(&m);
            if q.is_zero() || m.is_one() {
                continue;
            }
            if q.variables().is_empty() {
                return Err(Stop::Unsat(Certificate::CongruenceObstruction(m)));
            }
            congs.push((q, m));
        }
        self.congs = congs;
        Ok(())
    }

    /// Solves all affine rows at once and substitutes the general solution.
    /// Returns whether any row was affine.
    fn linear_layer(&mut self) -> Result<bool, Stop> {
        let eq_rows: Vec<AffineForm> = self
            .eqs
            .iter()
            .filter(|q| q.is_affine())
            .map(|q| q.affine().clone())
            .collect();
        let cong_rows: Vec<(AffineForm, BigInt)> = self
            .congs
            .iter()
            .filter(|(q, _)| q.is_affine())
            .map(|(q, m)| (q.affine().clone(), m.clone()))
            .collect();
        if eq_rows.is_empty() && cong_rows.is_empty() {
            return Ok(false);
        }
        let vars: Vec<usize> = eq_rows
            .iter()
            .chain(cong_rows.iter().map(|(f, _)| f))
            .flat_map(|f| f.variables().collect::<Vec<_>>())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let local = |f: &AffineForm| {
            let mut out = AffineForm::constant(f.constant_term().clone());
            for (v, c) in f.coeffs() {
                out.add_term(vars.binary_search(v).expect("collected"), c);
            }
            out
        };
        let k = vars.len();
        let local_eqs: Vec<AffineForm> = eq_rows.iter().map(local).collect();
        let mut all = local_eqs.clone();
        for (i, (f, m)) in cong_rows.iter().enumerate() {
            let mut row = local(f);
            row.add_term(k + i, &-m);
            all.push(row);
        }
        let Some(full) = solve_linear(&all, k + cong_rows.len()) else {
            if solve_linear(&local_eqs, k).is_none() {
                return Err(Stop::Unsat(Certificate::LinearInfeasible));
            }
            let m = cong_rows.iter().fold(BigInt::one(), |acc, (_, m)| lcm(&acc, m));
            return Err(Stop::Unsat(Certificate::CongruenceObstruction(m)));
        };
        let particular = full.particular[..k].to_vec();
        let basis: Vec<Vec<BigInt>> = full.basis.iter().map(|c| c[..k].to_vec()).collect();
        let sol = reduce_lattice(particular, &basis);
        let params: Vec<usize> = (0..sol.basis.len()).map(|_| self.fresh()).collect();
        self.eqs.retain(|q| !q.is_affine());
        self.congs.retain(|(q, _)| !q.is_affine());
        for (i, &v) in vars.iter().enumerate() {
            let mut expr = AffineForm::constant(sol.particular[i].clone());
            for (col, &lam) in sol.basis.iter().zip(&params) {
                expr.add_term(lam, &col[i]);
            }
            self.substitute(v, &expr);
            self.steps.push(Step::Define {
                var: v,
                num: expr.into(),
                den: BigInt::one(),
            });
        }
        Ok(true)
    }

    fn substitute(&mut self, v: usize, by: &AffineForm) {
        for q in &mut self.eqs {
            if q.variables().contains(&v) {
                *q = q.substitute(v, by);
            }
        }
        for (q, _) in &mut self.congs {
            if q.variables().contains(&v) {
                *q = q.substitute(v, by);
            }
        }
    }

    /// Removes one variable that occurs in exactly one row, linearly. The row
    /// becomes a congruence on the remaining terms.
    fn eliminate_single_occurrence(&mut self) -> bool {
        let mut seen: std::collections::BTreeMap<usize, (usize, usize)> = Default::default();
        let rows: Vec<&QuadExpr> = self
            .eqs
            .iter()
            .chain(self.congs.iter().map(|(q, _)| q))
            .collect();
        for (r, q) in rows.iter().enumerate() {
            for v in q.variables() {
                seen.entry(v).or_insert((r, 0)).1 += 1;
            }
        }
        let pick = seen.iter().find_map(|(&v, &(r, count))| {
            (count == 1 && !rows[r].nonlinear_variables().contains(&v)).then_some((v, r))
        });
        let Some((v, r)) = pick else {
            return false;
        };
        if r < self.eqs.len() {
            let q = self.eqs.remove(r);
            let kappa = q.affine().coeff(v);
            let rest = without_var(&q, v);
            self.steps.push(Step::Define {
                var: v,
                num: rest.scaled(&-BigInt::one()),
                den: kappa.clone(),
            });
            self.congs.push((rest, kappa.abs()));
        } else {
            let (q, m) = self.congs.remove(r - self.eqs.len());
            let kappa = q.affine().coeff(v);
            let rest = without_var(&q, v);
            let g = kappa.gcd(&m);
            let modulus = &m / &g;
            let inv = if modulus.is_one() {
                BigInt::zero()
            } else {
                mod_inverse(&(&kappa / &g), &modulus).expect("coprime after dividing by gcd")
            };
            self.steps.push(Step::Residue {
                var: v,
                rest: rest.clone(),
                g: g.clone(),
                inv,
                modulus,
            });
            self.congs.push((rest, g));
        }
        true
    }

    /// Fills in eliminated variables, latest elimination first.
    fn reconstruct(&self, values: &mut Vec<BigInt>) {
        if values.len() < self.nvars {
            values.resize(self.nvars, BigInt::zero());
        }
        for step in self.steps.iter().rev() {
            match step {
                Step::Define { var, num, den } => {
                    let n = num.eval(values).expect("all indices assigned");
                    debug_assert!((&n % den).is_zero());
                    values[*var] = n / den;
                }
                Step::Residue {
                    var,
                    rest,
                    g,
                    inv,
                    modulus,
                } => {
                    let r = rest.eval(values).expect("all indices assigned");
                    values[*var] = (-(r / g) * inv).mod_floor(modulus);
                }
            }
        }
    }

    /// Splits the rows into groups with pairwise disjoint variables.
    fn components(&self) -> Vec<Component> {
        let rows: Vec<(Row, BTreeSet<usize>)> = self
            .eqs
            .iter()
            .map(|q| (Row::Eq(q.clone()), q.variables()))
            .chain(
                self.congs
                    .iter()
                    .map(|(q, m)| (Row::Cong(q.clone(), m.clone()), q.variables())),
            )
            .collect();
        let mut parent: Vec<usize> = (0..rows.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut owner: std::collections::BTreeMap<usize, usize> = Default::default();
        for (r, (_, vars)) in rows.iter().enumerate() {
            for &v in vars {
                match owner.get(&v) {
                    Some(&o) => {
                        let (a, b) = (find(&mut parent, o), find(&mut parent, r));
                        parent[a.max(b)] = a.min(b);
                    }
                    None => {
                        owner.insert(v, r);
                    }
                }
            }
        }
        let mut comps: Vec<Component> = Vec::new();
        let mut index: std::collections::BTreeMap<usize, usize> = Default::default();
        for (r, (row, vars)) in rows.into_iter().enumerate() {
            let root = find(&mut parent, r);
            let c = *index.entry(root).or_insert_with(|| {
                comps.push(Component {
                    nvars: self.nvars,
                    vars: Vec::new(),
                    eqs: Vec::new(),
                    congs: Vec::new(),
                });
                comps.len() - 1
            });
            let comp = &mut comps[c];
            comp.vars.extend(vars);
            match row {
                Row::Eq(q) => comp.eqs.push(q),
                Row::Cong(q, m) => comp.congs.push((q, m)),
            }
        }
        for c in &mut comps {
            c.vars.sort();
            c.vars.dedup();
        }
        comps
    }
}

enum Row {
    Eq(QuadExpr),
    Cong(QuadExpr, BigInt),
}

/// Rows with connected variables, after the linear layers are exhausted:
/// every equation is genuinely quadratic.
struct Component {
    nvars: usize,
    vars: Vec<usize>,
    eqs: Vec<QuadExpr>,
    congs: Vec<(QuadExpr, BigInt)>,
}

impl Component {
    fn holds(&self, sigma: &[BigInt]) -> bool {
        self.eqs
            .iter()
            .all(|q| q.eval(sigma).expect("assigned").is_zero())
            && self
                .congs
                .iter()
                .all(|(q, m)| q.eval(sigma).expect("assigned").mod_floor(m).is_zero())
    }

    fn point(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.nvars]
    }

    fn solve(&self, cfg: &SolverConfig, budget: &Budget) -> Result<Outcome, Exhausted> {
        if self.eqs.is_empty() {
            if let Some(out) = self.residue_scan(budget)? {
                return Ok(out);
            }
        } else if self.vars.len() == 1 {
            return self.univariate(budget);
        } else if let Some(i) = self
            .eqs
            .iter()
            .position(|q| definite_sign(q, &q.variables().into_iter().collect::<Vec<_>>()).is_some())
        {
            return self.definite(i, cfg, budget);
        }
        let mut reason = None;
        if self.vars.len() == 2 && !self.eqs.is_empty() {
            match self.binary(cfg, budget)? {
                BinaryOutcome::Found(x, y) => {
                    let mut p = self.point();
                    p[self.vars[0]] = x;
                    p[self.vars[1]] = y;
                    return Ok(Outcome::Sat(p));
                }
                BinaryOutcome::NoSolution => {
                    return Ok(Outcome::Unsat(Certificate::BranchExhaustedComplete))
                }
                BinaryOutcome::Incomplete(r) => reason = Some(r),
            }
        }
        if let Some(m) = self.obstruction(budget)? {
            return Ok(Outcome::Unsat(Certificate::CongruenceObstruction(m)));
        }
        if self.eqs.is_empty() {
            return Ok(Outcome::Unknown(
                reason.unwrap_or_else(|| "congruence modulus too large to scan".into()),
            ));
        }
        match self.bounded_search(cfg, budget)? {
            Some(p) => Ok(Outcome::Sat(p)),
            None => Ok(Outcome::Unknown(
                reason.unwrap_or_else(|| "search bound reached".into()),
            )),
        }
    }

    /// Tries every residue tuple modulo the lcm of the moduli, which is exact
    /// for a system of congruences. `None` when the scan is too large.
    fn residue_scan(&self, budget: &Budget) -> Result<Option<Outcome>, Exhausted> {
        let m = self.congs.iter().fold(BigInt::one(), |acc, (_, m)| lcm(&acc, m));
        let Some(count) = scan_size(&m, self.vars.len()) else {
            return Ok(None);
        };
        if count > RESIDUE_LIMIT.min(budget.remaining()) {
            return Ok(None);
        }
        let mut point = self.point();
        let found = for_residues(&self.vars, &m, &mut point, budget, &mut |p| self.holds(p))?;
        Ok(Some(if found {
            Outcome::Sat(point)
        } else {
            Outcome::Unsat(Certificate::CongruenceObstruction(m))
        }))
    }

    fn univariate(&self, budget: &Budget) -> Result<Outcome, Exhausted> {
        let v = self.vars[0];
        let q = &self.eqs[0];
        let mut point = self.point();
        let at = |x: i64, point: &mut Vec<BigInt>| {
            point[v] = BigInt::from(x);
            q.eval(point).expect("assigned")
        };
        let c = at(0, &mut point);
        let (f1, fm1) = (at(1, &mut point), at(-1, &mut point));
        let a: BigInt = (&f1 + &fm1) / 2 - &c;
        let b: BigInt = (&f1 - &fm1) / 2;
        for root in integer_roots(&a, &b, &c) {
            budget.tick()?;
            point[v] = root;
            if self.holds(&point) {
                return Ok(Outcome::Sat(point));
            }
        }
        Ok(Outcome::Unsat(Certificate::BranchExhaustedComplete))
    }

    /// Row `i` is definite over its own variables: its finitely many points
    /// are substituted one at a time and the rest is decided recursively.
    fn definite(&self, i: usize, cfg: &SolverConfig, budget: &Budget) -> Result<Outcome, Exhausted> {
        let q = &self.eqs[i];
        let vars: Vec<usize> = q.variables().into_iter().collect();
        let mut unknown: Option<String> = None;
        let mut found: Option<Vec<BigInt>> = None;
        let mut failure: Option<Exhausted> = None;
        enumerate_definite(q, &vars, self.nvars, budget, &mut |pt| {
            let mut sub = Problem {
                nvars: self.nvars,
                eqs: Vec::new(),
                congs: Vec::new(),
                steps: Vec::new(),
            };
            let fix = |e: &QuadExpr| {
                vars.iter()
                    .fold(e.clone(), |e, &v| e.substitute(v, &AffineForm::constant(pt[v].clone())))
            };
            sub.eqs = self
                .eqs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, e)| fix(e))
                .collect();
            sub.congs = self.congs.iter().map(|(e, m)| (fix(e), m.clone())).collect();
            match solve_problem(sub, cfg, budget) {
                Ok(Outcome::Sat(mut vals)) => {
                    for &v in &vars {
                        vals[v] = pt[v].clone();
                    }
                    found = Some(vals);
                    Ok(true)
                }
                Ok(Outcome::Unsat(_)) => Ok(false),
                Ok(Outcome::Unknown(r)) => {
                    unknown.get_or_insert(r);
                    Ok(false)
                }
                Err(e) => {
                    failure = Some(e);
                    Err(e)
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(match (found, unknown) {
            (Some(v), _) => Outcome::Sat(v),
            (None, Some(r)) => Outcome::Unknown(r),
            (None, None) => Outcome::Unsat(Certificate::DefiniteFormExhausted),
        })
    }

    fn binary(&self, cfg: &SolverConfig, budget: &Budget) -> Result<BinaryOutcome, Exhausted> {
        let (x, y) = (self.vars[0], self.vars[1]);
        let q = &self.eqs[0];
        let coeff = |i: usize, j: usize| q.quad().get(&(i, j)).cloned().unwrap_or_default();
        let bq = BinaryQuadratic {
            a: coeff(x, x),
            b: coeff(x, y),
            c: coeff(y, y),
            d: q.affine().coeff(x),
            e: q.affine().coeff(y),
            f: q.affine().constant_term().clone(),
        };
        // Congruences alone are periodic; further equations are not.
        let period = (self.eqs.len() == 1)
            .then(|| self.congs.iter().fold(BigInt::one(), |acc, (_, m)| lcm(&acc, m)));
        let mut point = self.point();
        // with a period the predicate sees residues, so it may only test the
        // congruences; the binary solver guarantees the equation itself
        let mut accept = |a: &BigInt, b: &BigInt| {
            point[x] = a.clone();
            point[y] = b.clone();
            if period.is_some() {
                self.congs
                    .iter()
                    .all(|(q, m)| q.eval(&point).expect("assigned").mod_floor(m).is_zero())
            } else {
                self.holds(&point)
            }
        };
        let out = solve_binary_in(&bq, period.as_ref(), &mut accept, cfg, budget);
        // exhaustion inside the binary solver is reported as incomplete;
        // surface it so callers stop early
        if budget.remaining() == 0 {
            return Err(Exhausted::Nodes);
        }
        Ok(out)
    }

    /// Looks for a modulus under which the rows have no common zero.
    fn obstruction(&self, budget: &Budget) -> Result<Option<BigInt>, Exhausted> {
        let mut moduli: BTreeSet<BigInt> = self.congs.iter().map(|(_, m)| m.clone()).collect();
        moduli.extend(SMALL_MODULI.iter().map(|&m| BigInt::from(m)));
        let mut point = self.point();
        for m in moduli {
            match scan_size(&m, self.vars.len()) {
                Some(count) if count <= RESIDUE_LIMIT.min(budget.remaining()) => {}
                _ => continue,
            }
            let congs: Vec<(&QuadExpr, BigInt)> =
                self.congs.iter().map(|(q, mc)| (q, mc.gcd(&m))).collect();
            let found = for_residues(&self.vars, &m, &mut point, budget, &mut |p| {
                self.eqs
                    .iter()
                    .all(|q| q.eval(p).expect("assigned").mod_floor(&m).is_zero())
                    && congs
                        .iter()
                        .all(|(q, g)| q.eval(p).expect("assigned").mod_floor(g).is_zero())
            })?;
            if !found {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    /// Scans the other variables over growing cubes around the origin and
    /// solves the first equation for a pivot variable at each point.
    fn bounded_search(&self, cfg: &SolverConfig, budget: &Budget) -> Result<Option<Vec<BigInt>>, Exhausted> {
        let q = &self.eqs[0];
        let qvars = q.variables();
        let pivot = qvars
            .iter()
            .copied()
            .find(|&v| q.quad().contains_key(&(v, v)))
            .or_else(|| qvars.iter().copied().next())
            .expect("equations have variables");
        let others: Vec<usize> = self.vars.iter().copied().filter(|&v| v != pivot).collect();
        let bound = cfg.search_bound as i64;
        let mut point = self.point();
        let mut tuple = Vec::with_capacity(others.len());
        for r in 0..=bound {
            let mut visit = |t: &[i64]| -> Result<bool, Exhausted> {
                budget.tick()?;
                for (&v, &x) in others.iter().zip(t) {
                    point[v] = BigInt::from(x);
                }
                let mut at = |x: i64| {
                    point[pivot] = BigInt::from(x);
                    q.eval(&point).expect("assigned")
                };
                let c = at(0);
                let (f1, fm1) = (at(1), at(-1));
                let a: BigInt = (&f1 + &fm1) / 2 - &c;
                let b: BigInt = (&f1 - &fm1) / 2;
                let candidates: Vec<BigInt> = if a.is_zero() && b.is_zero() {
                    if !c.is_zero() {
                        return Ok(false);
                    }
                    (-bound..=bound).map(BigInt::from).collect()
                } else {
                    integer_roots(&a, &b, &c)
                };
                for x in candidates {
                    point[pivot] = x;
                    if self.holds(&point) {
                        return Ok(true);
                    }
                }
                Ok(false)
            };
            if shell(others.len(), r, true, &mut tuple, &mut visit)? {
                return Ok(Some(point));
            }
            if others.is_empty() {
                break;
            }
        }
        Ok(None)
    }
}

/// `m^k` if it fits in a `u64`.
fn scan_size(m: &BigInt, k: usize) -> Option<u64> {
    let m = m.to_u64()?;
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(m)?;
    }
    Some(acc)
}

/// Runs `test` on every assignment of `vars` in `[0, m)`, stopping at the
/// first success, which is left in `point`.
fn for_residues(
    vars: &[usize],
    m: &BigInt,
    point: &mut Vec<BigInt>,
    budget: &Budget,
    test: &mut dyn FnMut(&[BigInt]) -> bool,
) -> Result<bool, Exhausted> {
    for &v in vars {
        point[v] = BigInt::zero();
    }
    loop {
        budget.tick()?;
        if test(point) {
            return Ok(true);
        }
        let mut i = vars.len();
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            point[vars[i]] += 1;
            if &point[vars[i]] < m {
                break;
            }
            point[vars[i]] = BigInt::zero();
        }
    }
}

/// Visits the integer tuples of dimension `dim` with sup-norm exactly `r`
/// (at most `r` once `need` is false) extending `prefix`.
fn shell(
    dim: usize,
    r: i64,
    need: bool,
    prefix: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64]) -> Result<bool, Exhausted>,
) -> Result<bool, Exhausted> {
    if dim == 0 {
        if need && r > 0 {
            return Ok(false);
        }
        return visit(prefix);
    }
    let values: Vec<i64> = if dim == 1 && need && r > 0 {
        vec![r, -r]
    } else {
        std::iter::once(0)
            .chain((1..=r).flat_map(|x| [x, -x]))
            .collect()
    };
    for x in values {
        prefix.push(x);
        let found = shell(dim - 1, r, need && x.abs() != r, prefix, visit)?;
        prefix.pop();
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

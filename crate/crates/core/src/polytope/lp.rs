//! Exact two-phase simplex over a dense tableau with Bland's rule.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(terms: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> Self {
        Self { terms, relation, rhs }
    }

    pub fn lhs(&self, point: &[Rational]) -> Rational {
        self.terms.iter().map(|(v, c)| c * &point[*v]).sum()
    }

    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Linear constraints over `num_vars` variables. Variables are nonnegative
/// unless marked free.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    num_vars: usize,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
    objective: Option<(Sense, Vec<(usize, Rational)>)>,
}

/// Multipliers, one per constraint, proving infeasibility (Farkas).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub multipliers: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible(InfeasibilityCertificate),
    Optimal { value: Rational, point: Vec<Rational> },
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible(_))
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, free: vec![false; num_vars], constraints: Vec::new(), objective: None }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_free(&self, var: usize) -> bool {
        self.free[var]
    }

    pub fn add_var(&mut self) -> usize {
        self.num_vars += 1;
        self.free.push(false);
        self.num_vars - 1
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add(&mut self, constraint: Constraint) -> Result<()> {
        if let Some((v, _)) = constraint.terms.iter().find(|(v, _)| *v >= self.num_vars) {
            return Err(Error::Input(format!("constraint references undeclared variable {v}")));
        }
        self.constraints.push(constraint);
        Ok(())
    }

    pub fn add_le(&mut self, terms: Vec<(usize, Rational)>, rhs: Rational) -> Result<()> {
        self.add(Constraint::new(terms, Relation::Le, rhs))
    }

    pub fn add_ge(&mut self, terms: Vec<(usize, Rational)>, rhs: Rational) -> Result<()> {
        self.add(Constraint::new(terms, Relation::Ge, rhs))
    }

    pub fn add_eq(&mut self, terms: Vec<(usize, Rational)>, rhs: Rational) -> Result<()> {
        self.add(Constraint::new(terms, Relation::Eq, rhs))
    }

    pub fn set_objective(&mut self, sense: Sense, terms: Vec<(usize, Rational)>) -> Result<()> {
        if let Some((v, _)) = terms.iter().find(|(v, _)| *v >= self.num_vars) {
            return Err(Error::Input(format!("objective references undeclared variable {v}")));
        }
        self.objective = Some((sense, terms));
        Ok(())
    }

    pub fn clear_objective(&mut self) {
        self.objective = None;
    }

    /// Whether `point` satisfies every row and sign restriction.
    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars
            && point.iter().zip(&self.free).all(|(x, &f)| f || !x.is_negative())
            && self.constraints.iter().all(|c| c.satisfied_by(point))
    }

    /// Checks a Farkas certificate: the multiplied rows combine to `0 <= negative`
    /// once sign restrictions are taken into account.
    pub fn verify_infeasibility(&self, cert: &InfeasibilityCertificate) -> bool {
        if cert.multipliers.len() != self.constraints.len() {
            return false;
        }
        let mut combo = vec![Rational::zero(); self.num_vars];
        let mut rhs = Rational::zero();
        for (c, u) in self.constraints.iter().zip(&cert.multipliers) {
            let sign_ok = match c.relation {
                Relation::Le => !u.is_positive(),
                Relation::Ge => !u.is_negative(),
                Relation::Eq => true,
            };
            if !sign_ok {
                return false;
            }
            for (v, a) in &c.terms {
                combo[*v] += u * a;
            }
            rhs += u * &c.rhs;
        }
        let cols_ok = combo.iter().zip(&self.free).all(|(a, &f)| if f { a.is_zero() } else { !a.is_positive() });
        cols_ok && rhs.is_positive()
    }

    pub fn solve(&self) -> LpOutcome {
        lp_solve(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        let inv = self.rows[r][e].recip();
        if !inv.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for k in 0..self.rows.len() {
            if k == r || self.rows[k][e].is_zero() {
                continue;
            }
            let f = self.rows[k][e].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.rows[k][j] -= d;
            }
            self.rhs[k] -= &f * &prhs;
        }
        self.basis[r] = e;
    }

    fn reduced_costs(&self, cost: &[Rational], active: &[bool]) -> Vec<Rational> {
        let mut d: Vec<Rational> = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.rows[r].iter().enumerate() {
                if active[j] && !a.is_zero() {
                    d[j] -= cb * a;
                }
            }
        }
        d
    }

    /// Minimises `cost` over the active columns. Returns false if unbounded.
    fn minimize(&mut self, cost: &[Rational], active: &[bool]) -> bool {
        loop {
            let d = self.reduced_costs(cost, active);
            let entering = (0..d.len()).find(|&j| active[j] && d[j].is_negative());
            let Some(e) = entering else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][e];
                if a.is_positive() {
                    let ratio = &self.rhs[r] / a;
                    let better = match &best {
                        None => true,
                        Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, e);
        }
    }
}

/// Exact two-phase simplex. Infeasible outcomes carry a Farkas certificate that
/// has been re-checked against the system.
pub fn lp_solve(system: &LinearSystem) -> LpOutcome {
    let n = system.num_vars;
    // structural columns: x+ for every var, then x- for free vars
    let mut neg_col = vec![None; n];
    let mut ncols = n;
    for v in 0..n {
        if system.free[v] {
            neg_col[v] = Some(ncols);
            ncols += 1;
        }
    }
    let m = system.constraints.len();
    let mut slack_col = vec![None; m];
    for (r, c) in system.constraints.iter().enumerate() {
        if c.relation != Relation::Eq {
            slack_col[r] = Some(ncols);
            ncols += 1;
        }
    }
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut sign = Vec::with_capacity(m);
    for (r, c) in system.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols];
        for (v, a) in &c.terms {
            row[*v] += a;
            if let Some(nc) = neg_col[*v] {
                row[nc] -= a;
            }
        }
        if let Some(s) = slack_col[r] {
            row[s] = if c.relation == Relation::Le { Rational::one() } else { -Rational::one() };
        }
        let mut b = c.rhs.clone();
        let s = if b.is_negative() { -1 } else { 1 };
        if s < 0 {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
        }
        rows.push(row);
        rhs.push(b);
        sign.push(s);
    }
    // initial basis: slack with +1 coefficient, else an artificial column
    let mut basis = vec![0; m];
    let mut initial_col = vec![0; m];
    let mut artificial = Vec::new();
    let total_base = ncols;
    let mut extra = 0;
    for r in 0..m {
        match slack_col[r] {
            Some(s) if rows[r][s].is_positive() => {
                basis[r] = s;
                initial_col[r] = s;
            }
            _ => {
                let col = total_base + extra;
                extra += 1;
                artificial.push(col);
                basis[r] = col;
                initial_col[r] = col;
            }
        }
    }
    let width = total_base + extra;
    for (r, row) in rows.iter_mut().enumerate() {
        row.resize(width, Rational::zero());
        if basis[r] >= total_base {
            row[basis[r]] = Rational::one();
        }
    }
    let mut t = Tableau { rows, rhs, basis };
    let mut cost1 = vec![Rational::zero(); width];
    for &a in &artificial {
        cost1[a] = Rational::one();
    }
    let all_active = vec![true; width];
    t.minimize(&cost1, &all_active);
    let phase1: Rational = t.basis.iter().zip(&t.rhs).filter(|(b, _)| cost1[**b].is_one()).map(|(_, v)| v.clone()).sum();
    if phase1.is_positive() {
        let d = t.reduced_costs(&cost1, &all_active);
        let multipliers: Vec<Rational> = (0..m)
            .map(|r| {
                let y = &cost1[initial_col[r]] - &d[initial_col[r]];
                if sign[r] < 0 {
                    -y
                } else {
                    y
                }
            })
            .collect();
        let cert = InfeasibilityCertificate { multipliers };
        assert!(system.verify_infeasibility(&cert), "simplex produced an invalid Farkas certificate");
        return LpOutcome::Infeasible(cert);
    }
    // drive artificials out of the basis; rows that cannot be pivoted are redundant
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= total_base {
            if let Some(e) = (0..total_base).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, e);
                r += 1;
            } else {
                t.rows.remove(r);
                t.rhs.remove(r);
                t.basis.remove(r);
            }
        } else {
            r += 1;
        }
    }
    let mut active = vec![true; width];
    for &a in &artificial {
        active[a] = false;
    }
    let mut cost2 = vec![Rational::zero(); width];
    let sense = system.objective.as_ref().map(|(s, _)| *s).unwrap_or(Sense::Minimize);
    if let Some((_, terms)) = &system.objective {
        for (v, c) in terms {
            let c = if sense == Sense::Maximize { -c.clone() } else { c.clone() };
            cost2[*v] += &c;
            if let Some(nc) = neg_col[*v] {
                cost2[nc] -= &c;
            }
        }
    }
    if !t.minimize(&cost2, &active) {
        return LpOutcome::Unbounded;
    }
    let mut col_value = vec![Rational::zero(); width];
    for (r, &b) in t.basis.iter().enumerate() {
        col_value[b] = t.rhs[r].clone();
    }
    let point: Vec<Rational> = (0..n)
        .map(|v| match neg_col[v] {
            Some(nc) => &col_value[v] - &col_value[nc],
            None => col_value[v].clone(),
        })
        .collect();
    let value: Rational = match &system.objective {
        Some((_, terms)) => terms.iter().map(|(v, c)| c * &point[*v]).sum(),
        None => Rational::zero(),
    };
    debug_assert!(system.satisfied_by(&point));
    LpOutcome::Optimal { value, point }
}

//! Incrementally maintained reduced row echelon form of a sparse system of
//! linear equalities over the rationals.
//!
//! Columns carry a priority: the pivot of every row is its highest-priority
//! column. For a fixed priority the reduced form is unique, so the set of
//! determined variables and the way undetermined ones depend on free columns
//! does not depend on insertion order.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Independent,
    Redundant,
    Inconsistent,
}

#[derive(Debug, Clone)]
struct Row {
    terms: BTreeMap<usize, Rational>,
    rhs: Rational,
}

/// Linear equalities `sum coef * var = rhs` in reduced row echelon form.
#[derive(Debug, Clone)]
pub struct EqualitySystem {
    pos_of: Vec<usize>,
    var_of: Vec<usize>,
    rows: Vec<Row>,
    pivot_of_pos: Vec<Option<usize>>,
    inconsistent: bool,
}

/// `var = constant + sum coef * free_var`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineExpr {
    pub constant: Rational,
    pub terms: Vec<(usize, Rational)>,
}

impl AffineExpr {
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }
}

impl EqualitySystem {
    /// All columns with priority equal to their index.
    pub fn new(num_vars: usize) -> Self {
        Self::with_priority((0..num_vars).collect())
    }

    /// `order` lists variables from highest to lowest pivot priority.
    pub fn with_priority(order: Vec<usize>) -> Self {
        let n = order.len();
        let mut pos_of = vec![usize::MAX; n];
        for (pos, &var) in order.iter().enumerate() {
            pos_of[var] = pos;
        }
        assert!(pos_of.iter().all(|&p| p != usize::MAX), "priority must be a permutation");
        Self { pos_of, var_of: order, rows: Vec::new(), pivot_of_pos: vec![None; n], inconsistent: false }
    }

    pub fn num_vars(&self) -> usize {
        self.var_of.len()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    fn reduce(&self, terms: &[(usize, Rational)], rhs: &Rational) -> Row {
        let mut row = Row { terms: BTreeMap::new(), rhs: rhs.clone() };
        for (var, coef) in terms {
            if coef.is_zero() {
                continue;
            }
            let pos = self.pos_of[*var];
            let entry = row.terms.entry(pos).or_insert_with(Rational::zero);
            *entry += coef;
            if entry.is_zero() {
                row.terms.remove(&pos);
            }
        }
        let pivots: Vec<(usize, Rational)> = row
            .terms
            .iter()
            .filter_map(|(&pos, c)| self.pivot_of_pos[pos].map(|r| (r, c.clone())))
            .collect();
        for (r, factor) in pivots {
            let pivot_row = &self.rows[r];
            for (&pos, c) in &pivot_row.terms {
                let entry = row.terms.entry(pos).or_insert_with(Rational::zero);
                *entry -= &factor * c;
                if entry.is_zero() {
                    row.terms.remove(&pos);
                }
            }
            row.rhs -= &factor * &pivot_row.rhs;
        }
        row
    }

    /// Adds `sum coef * var = rhs`.
    pub fn insert(&mut self, terms: &[(usize, Rational)], rhs: Rational) -> InsertOutcome {
        let mut row = self.reduce(terms, &rhs);
        let Some((&pivot, lead)) = row.terms.iter().next() else {
            if row.rhs.is_zero() {
                return InsertOutcome::Redundant;
            }
            self.inconsistent = true;
            return InsertOutcome::Inconsistent;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            for c in row.terms.values_mut() {
                *c *= &inv;
            }
            row.rhs *= &inv;
        }
        for other in &mut self.rows {
            if let Some(factor) = other.terms.get(&pivot).cloned() {
                for (&pos, c) in &row.terms {
                    let entry = other.terms.entry(pos).or_insert_with(Rational::zero);
                    *entry -= &factor * c;
                    if entry.is_zero() {
                        other.terms.remove(&pos);
                    }
                }
                other.rhs -= &factor * &row.rhs;
            }
        }
        self.pivot_of_pos[pivot] = Some(self.rows.len());
        self.rows.push(row);
        InsertOutcome::Independent
    }

    /// Whether the equality is implied by the system.
    pub fn implies(&self, terms: &[(usize, Rational)], rhs: &Rational) -> bool {
        let row = self.reduce(terms, rhs);
        row.terms.is_empty() && row.rhs.is_zero()
    }

    /// Whether the equality contradicts the system on its own.
    pub fn contradicts(&self, terms: &[(usize, Rational)], rhs: &Rational) -> bool {
        let row = self.reduce(terms, rhs);
        row.terms.is_empty() && !row.rhs.is_zero()
    }

    /// The variable as an affine function of the free (non-pivot) variables.
    pub fn expression(&self, var: usize) -> AffineExpr {
        let pos = self.pos_of[var];
        match self.pivot_of_pos[pos] {
            None => AffineExpr { constant: Rational::zero(), terms: vec![(var, Rational::one())] },
            Some(r) => {
                let row = &self.rows[r];
                AffineExpr {
                    constant: row.rhs.clone(),
                    terms: row
                        .terms
                        .iter()
                        .filter(|(&p, _)| p != pos)
                        .map(|(&p, c)| (self.var_of[p], -c.clone()))
                        .collect(),
                }
            }
        }
    }

    /// The value of `var` if the system determines it.
    pub fn value(&self, var: usize) -> Option<Rational> {
        let e = self.expression(var);
        e.is_constant().then_some(e.constant)
    }

    /// Rows as `(terms, rhs)` over variable indices.
    pub fn rows(&self) -> impl Iterator<Item = (Vec<(usize, Rational)>, Rational)> + '_ {
        self.rows.iter().map(|row| {
            (row.terms.iter().map(|(&p, c)| (self.var_of[p], c.clone())).collect(), row.rhs.clone())
        })
    }

    /// Rows whose pivot is `var` (at most one).
    pub fn is_pivot(&self, var: usize) -> bool {
        self.pivot_of_pos[self.pos_of[var]].is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn determines_values_and_detects_inconsistency() {
        let mut s = EqualitySystem::new(3);
        // x + y = 1, x - y = 0
        assert_eq!(s.insert(&[(0, int(1)), (1, int(1))], int(1)), InsertOutcome::Independent);
        assert_eq!(s.value(0), None);
        assert_eq!(s.insert(&[(0, int(1)), (1, int(-1))], int(0)), InsertOutcome::Independent);
        assert_eq!(s.value(0), Some(rat(1, 2)));
        assert_eq!(s.value(1), Some(rat(1, 2)));
        assert_eq!(s.value(2), None);
        assert_eq!(s.insert(&[(0, int(2))], int(1)), InsertOutcome::Redundant);
        assert_eq!(s.insert(&[(1, int(1))], int(1)), InsertOutcome::Inconsistent);
        assert!(s.is_inconsistent());
    }

    #[test]
    fn low_priority_variable_stays_free() {
        // priority: 1, 2, 0 -> variable 0 is pivoted last
        let mut s = EqualitySystem::with_priority(vec![1, 2, 0]);
        s.insert(&[(0, int(1)), (1, int(1))], rat(1, 12));
        s.insert(&[(1, int(1)), (2, int(1))], int(1));
        let e = s.expression(2);
        assert_eq!(e.constant, rat(11, 12));
        assert_eq!(e.terms, vec![(0, int(1))]);
        assert!(!s.is_pivot(0));
    }
}

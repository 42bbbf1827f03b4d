//! Random assignments as bistochastic matrices of exact rationals.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// An `n x n` bistochastic matrix: rows are agents, columns are objects.
///
/// Row and column sums are validated to be exactly 1 on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    rows: Vec<Vec<Rational>>,
}

impl Assignment {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        validate_bistochastic(&rows)?;
        Ok(Self { rows })
    }

    /// Builds from `i64` pairs `(numer, denom)`; handy in tests and fixtures.
    pub fn from_fractions(rows: &[&[(i64, i64)]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|row| row.iter().map(|&(p, q)| rational::rat(p, q)).collect())
                .collect(),
        )
    }

    /// Parses rows of `p/q` strings.
    pub fn from_strs(rows: &[&[&str]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|row| row.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<Rational>>) -> Self {
        debug_assert!(validate_bistochastic(&rows).is_ok());
        Self { rows }
    }

    /// Every entry equal to `1/n`.
    pub fn uniform(n: usize) -> Self {
        let v = rational::rat(1, n as i64);
        Self { rows: vec![vec![v; n]; n] }
    }

    /// The deterministic assignment giving agent `i` object `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (i, &j) in perm.iter().enumerate() {
            if j >= n {
                return Err(Error::Input(format!("object index {j} out of range")));
            }
            rows[i][j] = Rational::one();
        }
        Self::new(rows)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.rows[agent]
    }

    pub fn entry(&self, agent: usize, object: usize) -> &Rational {
        &self.rows[agent][object]
    }

    pub fn into_rows(self) -> Vec<Vec<Rational>> {
        self.rows
    }

    pub fn assignment_row(&self, agent: usize) -> AssignmentRow {
        AssignmentRow { probabilities: self.rows[agent].clone() }
    }

    pub fn is_deterministic(&self) -> bool {
        self.rows.iter().flatten().all(|v| v.is_zero() || v.is_one())
    }

    /// For a deterministic assignment, the object held by each agent.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if !self.is_deterministic() {
            return None;
        }
        Some(self.rows.iter().map(|row| row.iter().position(|v| v.is_one()).unwrap()).collect())
    }

    /// Rows permuted so that agent `i`'s row moves to `perm[i]`.
    pub fn permute_agents(&self, perm: &[usize]) -> Self {
        let mut rows = self.rows.clone();
        for (i, row) in self.rows.iter().enumerate() {
            rows[perm[i]] = row.clone();
        }
        Self { rows }
    }

    /// Columns permuted so that object `j`'s column moves to `perm[j]`.
    pub fn permute_objects(&self, perm: &[usize]) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = row.clone();
                for (j, v) in row.iter().enumerate() {
                    out[perm[j]] = v.clone();
                }
                out
            })
            .collect();
        Self { rows }
    }
}

/// One agent's assignment vector: a probability per object summing to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AssignmentRow {
    probabilities: Vec<Rational>,
}

impl AssignmentRow {
    pub fn new(probabilities: Vec<Rational>) -> Result<Self> {
        if let Some(v) = probabilities.iter().find(|v| !rational::is_probability(v)) {
            return Err(Error::NotBistochastic(format!("entry {v} outside [0,1]")));
        }
        let sum: Rational = probabilities.iter().sum();
        if !sum.is_one() {
            return Err(Error::NotBistochastic(format!("row sums to {sum}")));
        }
        Ok(Self { probabilities })
    }

    pub fn from_fractions(entries: &[(i64, i64)]) -> Result<Self> {
        Self::new(entries.iter().map(|&(p, q)| rational::rat(p, q)).collect())
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

pub(crate) fn validate_bistochastic(rows: &[Vec<Rational>]) -> Result<()> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    if let Some(row) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Dimension(format!("row of length {} in a {n}-row matrix", row.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !rational::is_probability(v) {
                return Err(Error::NotBistochastic(format!("entry ({}, {}) = {v} outside [0,1]", i + 1, j + 1)));
            }
        }
        let sum: Rational = row.iter().sum();
        if !sum.is_one() {
            return Err(Error::NotBistochastic(format!("row {} sums to {sum}", i + 1)));
        }
    }
    for j in 0..n {
        let sum: Rational = rows.iter().map(|r| &r[j]).sum();
        if !sum.is_one() {
            return Err(Error::NotBistochastic(format!("column {} sums to {sum}", j + 1)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_profile_two_matrix_of_first_theorem() {
        let m = Assignment::from_strs(&[
            &["1/4", "1/4", "1/3", "1/6"],
            &["1/4", "1/4", "1/3", "1/6"],
            &["1/4", "1/4", "1/3", "1/6"],
            &["1/4", "1/4", "0", "1/2"],
        ])
        .unwrap();
        assert_eq!(m.entry(3, 3), &rational::rat(1, 2));
    }

    #[test]
    fn rejects_row_summing_above_one() {
        let err = Assignment::from_strs(&[&["1/4", "1"], &["3/4", "0"]]).unwrap_err();
        assert!(matches!(err, Error::NotBistochastic(_)));
    }

    #[test]
    fn rejects_column_defect_and_negative_entries() {
        assert!(matches!(
            Assignment::from_strs(&[&["1", "0"], &["1", "0"]]),
            Err(Error::NotBistochastic(_))
        ));
        assert!(matches!(
            Assignment::from_strs(&[&["-1", "2"], &["2", "-1"]]),
            Err(Error::NotBistochastic(_))
        ));
        assert!(matches!(Assignment::from_strs(&[&["1", "0"]]), Err(Error::Dimension(_))));
    }

    #[test]
    fn permutation_round_trip() {
        let m = Assignment::permutation(&[2, 0, 1]).unwrap();
        assert!(m.is_deterministic());
        assert_eq!(m.as_permutation(), Some(vec![2, 0, 1]));
        assert!(!Assignment::uniform(3).is_deterministic());
    }
}

//! First order-stochastic dominance between assignment vectors and ordinal
//! dominance between assignments.
//!
//! Prefix sums are taken over closed prefixes of the preference order (the
//! first `k` objects, `k = 1..n`). Because every row carries total mass 1 this
//! induces the same relation as the strict-prefix form, and equal prefix sums
//! everywhere force identical rows, so "weakly but not strictly dominates"
//! never occurs separately from [`DominanceRelation::Equal`].

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::assignment::{Assignment, AssignmentRow};
use crate::error::{Error, Result};
use crate::profile::{PreferenceOrder, PreferenceProfile};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DominanceRelation {
    Equal,
    StrictlyDominates,
    /// Some prefix inequality fails; the witness names where.
    Incomparable,
}

/// Where a prefix inequality is strict (for `StrictlyDominates`) or violated
/// (for `Incomparable`). `object` is the last object of the offending prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceWitness {
    pub agent: Option<usize>,
    pub object: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub relation: DominanceRelation,
    pub witness: Option<DominanceWitness>,
}

impl DominanceVerdict {
    /// `x` weakly dominates `y` (equal or strict).
    pub fn weakly(&self) -> bool {
        matches!(self.relation, DominanceRelation::Equal | DominanceRelation::StrictlyDominates)
    }

    pub fn strictly(&self) -> bool {
        self.relation == DominanceRelation::StrictlyDominates
    }
}

/// Compares `x` against `y` at `order`: does `x` first order-stochastically
/// dominate `y`?
pub fn fosd_compare(x: &[Rational], y: &[Rational], order: &PreferenceOrder) -> Result<DominanceVerdict> {
    if x.len() != order.len() || y.len() != order.len() {
        return Err(Error::Dimension(format!(
            "rows of length {} and {} against an order of {} objects",
            x.len(),
            y.len(),
            order.len()
        )));
    }
    let mut sx = Rational::default();
    let mut sy = Rational::default();
    let mut first_strict = None;
    for &j in order.ranking() {
        sx += &x[j];
        sy += &y[j];
        match sx.cmp(&sy) {
            Ordering::Less => {
                return Ok(DominanceVerdict {
                    relation: DominanceRelation::Incomparable,
                    witness: Some(DominanceWitness { agent: None, object: j }),
                })
            }
            Ordering::Greater if first_strict.is_none() => first_strict = Some(j),
            _ => {}
        }
    }
    Ok(match first_strict {
        Some(object) => DominanceVerdict {
            relation: DominanceRelation::StrictlyDominates,
            witness: Some(DominanceWitness { agent: None, object }),
        },
        None => DominanceVerdict { relation: DominanceRelation::Equal, witness: None },
    })
}

/// [`fosd_compare`] on validated rows.
pub fn fosd_compare_rows(x: &AssignmentRow, y: &AssignmentRow, order: &PreferenceOrder) -> Result<DominanceVerdict> {
    fosd_compare(x.as_slice(), y.as_slice(), order)
}

/// Does `x` ordinally dominate `y` at `profile`?
pub fn ordinal_dominance(x: &Assignment, y: &Assignment, profile: &PreferenceProfile) -> Result<DominanceVerdict> {
    if x.n() != profile.n() || y.n() != profile.n() {
        return Err(Error::Dimension(format!(
            "matrices of size {} and {} for a profile of {} agents",
            x.n(),
            y.n(),
            profile.n()
        )));
    }
    let mut strict = None;
    for agent in 0..profile.n() {
        let v = fosd_compare(x.row(agent), y.row(agent), profile.order(agent))?;
        let witness = v.witness.map(|w| DominanceWitness { agent: Some(agent), ..w });
        match v.relation {
            DominanceRelation::Incomparable => {
                return Ok(DominanceVerdict { relation: DominanceRelation::Incomparable, witness })
            }
            DominanceRelation::StrictlyDominates if strict.is_none() => strict = witness,
            _ => {}
        }
    }
    Ok(match strict {
        Some(w) => DominanceVerdict { relation: DominanceRelation::StrictlyDominates, witness: Some(w) },
        None => DominanceVerdict { relation: DominanceRelation::Equal, witness: None },
    })
}

//! Certificates that ordinal efficiency forces an entry to zero.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::assignment::Assignment;
use crate::axioms::is_ordinally_efficient;
use crate::error::{Error, Result};
use crate::polytope::{birkhoff_system, entry_var, enumerate_vertices, LinearSystem, LpOutcome, Sense};
use crate::profile::{permutations, PreferenceProfile};
use crate::rational::{format, Rational};

/// Local equalities over the `n * n` entries of one profile's matrix.
pub type LocalEqualities = Vec<(Vec<(usize, Rational)>, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroCertificate {
    /// Every vertex with the entry positive has a trading cycle.
    Vertices { vertices: usize, positive: usize },
    /// The entry is zero on every face where some object order makes the
    /// trading relation acyclic.
    OrderFaces { faces: usize },
}

impl std::fmt::Display for ZeroCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ZeroCertificate::Vertices { vertices, positive } => {
                let noun = if *vertices == 1 { "vertex" } else { "vertices" };
                write!(f, "{vertices} {noun}, {positive} with the entry positive, each on a trading cycle")
            }
            ZeroCertificate::OrderFaces { faces } => write!(f, "entry vanishes on all {faces} acyclic faces"),
        }
    }
}

/// Entries forced to zero when the trading relation is consistent with the
/// object order `pi`: agent `i` cannot hold `k` if it prefers some object
/// placed after `k`.
pub fn order_zero_set(profile: &PreferenceProfile, pi: &[usize]) -> BTreeSet<(usize, usize)> {
    let n = profile.n();
    let mut place = vec![0; n];
    for (p, &o) in pi.iter().enumerate() {
        place[o] = p;
    }
    let mut zeros = BTreeSet::new();
    for i in 0..n {
        let ranking = profile.order(i).ranking();
        for (pos, &k) in ranking.iter().enumerate() {
            if ranking[..pos].iter().any(|&j| place[j] > place[k]) {
                zeros.insert((i, k));
            }
        }
    }
    zeros
}

/// The inclusion-minimal zero sets over all object orders. An assignment is
/// ordinally efficient iff it vanishes on one of them.
pub fn efficient_faces(profile: &PreferenceProfile) -> Vec<BTreeSet<(usize, usize)>> {
    let all: BTreeSet<BTreeSet<(usize, usize)>> =
        permutations(profile.n()).iter().map(|pi| order_zero_set(profile, pi)).collect();
    all.iter().filter(|z| !all.iter().any(|w| w != *z && w.is_subset(z))).cloned().collect()
}

/// Rows as `(a,b,..)/(c,d,..)`.
pub fn rows_text(x: &Assignment) -> String {
    x.rows()
        .iter()
        .map(|r| format!("({})", r.iter().map(format).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join("/")
}

fn local_system(n: usize, equalities: &LocalEqualities) -> Result<LinearSystem> {
    let mut system = birkhoff_system(n);
    for (terms, rhs) in equalities {
        system.add_eq(terms.clone(), rhs.clone())?;
    }
    Ok(system)
}

/// Certifies that every ordinally efficient matrix in the polytope cut out by
/// `equalities` has entry `(i, j)` equal to zero. Vertex enumeration is used
/// when the polytope is small, order faces otherwise.
pub fn certify_efficiency_zero(
    profile: &PreferenceProfile,
    equalities: &LocalEqualities,
    entry: (usize, usize),
) -> Result<ZeroCertificate> {
    match certify_by_vertices(profile, equalities, entry) {
        Err(Error::Capacity(_)) => certify_by_faces(profile, equalities, entry),
        other => other,
    }
}

pub fn certify_by_vertices(
    profile: &PreferenceProfile,
    equalities: &LocalEqualities,
    (i, j): (usize, usize),
) -> Result<ZeroCertificate> {
    let n = profile.n();
    let system = local_system(n, equalities)?;
    let vertices = enumerate_vertices(&system)?;
    if vertices.is_empty() {
        return Err(Error::Certification("the constraint polytope is empty".into()));
    }
    let mut positive = 0;
    for v in &vertices {
        if !v[entry_var(n, i, j)].is_positive() {
            continue;
        }
        positive += 1;
        let x = Assignment::new(v.chunks(n).map(|r| r.to_vec()).collect())?;
        if is_ordinally_efficient(&x, profile)?.is_efficient() {
            return Err(Error::Certification(format!(
                "vertex {} is ordinally efficient with entry {} positive",
                rows_text(&x),
                format(x.entry(i, j))
            )));
        }
    }
    Ok(ZeroCertificate::Vertices { vertices: vertices.len(), positive })
}

pub fn certify_by_faces(
    profile: &PreferenceProfile,
    equalities: &LocalEqualities,
    (i, j): (usize, usize),
) -> Result<ZeroCertificate> {
    let n = profile.n();
    let base = local_system(n, equalities)?;
    if !base.solve().is_feasible() {
        return Err(Error::Certification("the constraint polytope is empty".into()));
    }
    let faces = efficient_faces(profile);
    for face in &faces {
        if face.contains(&(i, j)) {
            continue;
        }
        let mut system = base.clone();
        for &(a, b) in face {
            system.add_eq(vec![(entry_var(n, a, b), Rational::one())], Rational::zero())?;
        }
        system.set_objective(Sense::Maximize, vec![(entry_var(n, i, j), Rational::one())])?;
        match system.solve() {
            LpOutcome::Infeasible(_) => {}
            LpOutcome::Optimal { value, .. } if value.is_zero() => {}
            LpOutcome::Optimal { value, point } => {
                let x = Assignment::new(point.chunks(n).map(|r| r.to_vec()).collect())?;
                return Err(Error::Certification(format!(
                    "ordinally efficient point {} has entry {}",
                    rows_text(&x),
                    format(&value)
                )));
            }
            LpOutcome::Unbounded => return Err(Error::Certification("unbounded face LP".into())),
        }
    }
    Ok(ZeroCertificate::OrderFaces { faces: faces.len() })
}

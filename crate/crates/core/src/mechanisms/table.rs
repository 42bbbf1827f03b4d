use std::collections::HashMap;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Mechanism;
use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::profile::PreferenceProfile;
use crate::rational::{self, Rational};

/// A mechanism given by a finite table of profiles and their assignments.
#[derive(Debug, Clone, Default)]
pub struct TableMechanism {
    name: String,
    entries: Vec<(PreferenceProfile, Assignment)>,
    index: HashMap<PreferenceProfile, usize>,
}

impl TableMechanism {
    /// Later duplicates of a profile replace earlier ones.
    pub fn new(name: impl Into<String>, entries: impl IntoIterator<Item = (PreferenceProfile, Assignment)>) -> Self {
        let mut table = Self { name: name.into(), ..Self::default() };
        for (p, m) in entries {
            table.insert(p, m);
        }
        table
    }

    pub fn insert(&mut self, profile: PreferenceProfile, matrix: Assignment) {
        match self.index.get(&profile) {
            Some(&k) => self.entries[k].1 = matrix,
            None => {
                self.index.insert(profile.clone(), self.entries.len());
                self.entries.push((profile, matrix));
            }
        }
    }

    pub fn entries(&self) -> &[(PreferenceProfile, Assignment)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Tabulates another mechanism on the given profiles.
    pub fn tabulate<M: Mechanism + ?Sized>(mech: &M, profiles: &[PreferenceProfile]) -> Result<Self> {
        let entries = profiles
            .iter()
            .map(|p| Ok((p.clone(), mech.evaluate(p)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(format!("table({})", mech.name()), entries))
    }
}

impl Mechanism for TableMechanism {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn evaluate(&self, profile: &PreferenceProfile) -> Result<Assignment> {
        self.index
            .get(profile)
            .map(|&k| self.entries[k].1.clone())
            .ok_or_else(|| Error::Domain(format!("{} has no entry for\n{profile}", self.name)))
    }

    fn in_domain(&self, profile: &PreferenceProfile) -> bool {
        self.index.contains_key(profile)
    }

    fn finite_domain(&self) -> Option<Vec<PreferenceProfile>> {
        Some(self.entries.iter().map(|(p, _)| p.clone()).collect())
    }
}

/// `sum_k weights[k] * P(perms[k])`. Weights must be nonnegative and sum to 1.
pub fn convex_combination(weights: &[Rational], perms: &[Vec<usize>]) -> Result<Assignment> {
    if weights.len() != perms.len() || perms.is_empty() {
        return Err(Error::Input("need one weight per permutation".into()));
    }
    let n = perms[0].len();
    let mut rows = vec![vec![Rational::zero(); n]; n];
    for (w, perm) in weights.iter().zip(perms) {
        if perm.len() != n {
            return Err(Error::Dimension("permutations of different sizes".into()));
        }
        for (i, &j) in perm.iter().enumerate() {
            rows[i][j] += w;
        }
    }
    Assignment::new(rows)
}

/// A table over `profiles` whose matrices are random convex combinations of
/// one to three permutation matrices with small rational weights.
///
/// Deterministic in `seed`.
pub fn random_table(n: usize, profiles: &[PreferenceProfile], seed: u64) -> Result<TableMechanism> {
    if n < 2 {
        return Err(Error::Input(format!("random tables need n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(profiles.len());
    for profile in profiles {
        if profile.n() != n {
            return Err(Error::Dimension(format!("profile of size {} in a table of size {n}", profile.n())));
        }
        let k = rng.gen_range(1..=3);
        let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        let total: i64 = raw.iter().sum();
        let weights: Vec<Rational> = raw.iter().map(|&w| rational::rat(w, total)).collect();
        let perms: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                perm
            })
            .collect();
        entries.push((profile.clone(), convex_combination(&weights, &perms)?));
    }
    Ok(TableMechanism::new(format!("random-table(n={n}, seed={seed})"), entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn table_returns_stored_matrix_and_rejects_others() {
        let p = PreferenceProfile::from_strs(&["a>b", "b>a"]).unwrap();
        let q = PreferenceProfile::from_strs(&["a>b", "a>b"]).unwrap();
        let m = Assignment::permutation(&[0, 1]).unwrap();
        let t = TableMechanism::new("t", [(p.clone(), m.clone())]);
        assert_eq!(t.evaluate(&p).unwrap(), m);
        assert!(matches!(t.evaluate(&q), Err(Error::Domain(_))));
        assert!(t.in_domain(&p) && !t.in_domain(&q));
    }

    #[test]
    fn random_tables_are_deterministic_and_bistochastic() {
        let profiles = PreferenceProfile::all(3).unwrap();
        let a = random_table(3, &profiles, 7).unwrap();
        let b = random_table(3, &profiles, 7).unwrap();
        assert_eq!(a.entries(), b.entries());
        assert_ne!(a.entries(), random_table(3, &profiles, 8).unwrap().entries());
        for (_, m) in a.entries() {
            assert!(Assignment::new(m.rows().to_vec()).is_ok());
        }
    }

    #[test]
    fn halves_of_two_permutations() {
        let m = convex_combination(&[rat(1, 2), rat(1, 2)], &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(m.rows().iter().flatten().all(|v| *v == rat(1, 2)));
    }
}

use num_bigint::BigInt;

use super::Mechanism;
use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::profile::{permutations, PreferenceProfile};
use crate::rational::Rational;

/// Largest `n` for which RSD is computed by enumerating all `n!` priority orders.
pub const RSD_MAX_AGENTS: usize = 6;

/// Outcome of serial dictatorship: `out[i]` is the object agent `i` receives
/// when agents choose in the order `priority`.
pub fn serial_dictatorship(profile: &PreferenceProfile, priority: &[usize]) -> Vec<usize> {
    let n = profile.n();
    let mut taken = vec![false; n];
    let mut out = vec![usize::MAX; n];
    for &agent in priority {
        let j = profile
            .order(agent)
            .ranking()
            .iter()
            .copied()
            .find(|&j| !taken[j])
            .expect("an object remains for every agent");
        taken[j] = true;
        out[agent] = j;
    }
    out
}

/// Random Serial Dictatorship: the uniform average of serial dictatorship over
/// all priority orders, computed exactly.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rsd;

impl Mechanism for Rsd {
    fn name(&self) -> String {
        "rsd".into()
    }

    fn evaluate(&self, profile: &PreferenceProfile) -> Result<Assignment> {
        let n = profile.n();
        if n > RSD_MAX_AGENTS {
            return Err(Error::Capacity(format!(
                "RSD enumerates n! priority orders and supports n <= {RSD_MAX_AGENTS}, got {n}"
            )));
        }
        let mut counts = vec![vec![0u64; n]; n];
        let priorities = permutations(n);
        for priority in &priorities {
            for (agent, j) in serial_dictatorship(profile, priority).into_iter().enumerate() {
                counts[agent][j] += 1;
            }
        }
        let total = BigInt::from(priorities.len());
        let rows = counts
            .into_iter()
            .map(|row| row.into_iter().map(|c| Rational::new(BigInt::from(c), total.clone())).collect())
            .collect();
        Ok(Assignment::from_rows_unchecked(rows))
    }
}

/// Deterministic serial dictatorship with a fixed priority order of agents.
#[derive(Debug, Clone)]
pub struct SerialDictatorship {
    pub priority: Vec<usize>,
}

impl Mechanism for SerialDictatorship {
    fn name(&self) -> String {
        let p: Vec<String> = self.priority.iter().map(|i| (i + 1).to_string()).collect();
        format!("sd[{}]", p.join(","))
    }

    fn evaluate(&self, profile: &PreferenceProfile) -> Result<Assignment> {
        if self.priority.len() != profile.n() {
            return Err(Error::Dimension(format!(
                "priority over {} agents for a profile of {}",
                self.priority.len(),
                profile.n()
            )));
        }
        Assignment::permutation(&serial_dictatorship(profile, &self.priority))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn identical_preferences_give_uniform() {
        let p = PreferenceProfile::from_strs(&["a>b>c>d"; 4]).unwrap();
        assert_eq!(Rsd.evaluate(&p).unwrap(), Assignment::uniform(4));
    }

    #[test]
    fn single_agent_gets_its_object() {
        let p = PreferenceProfile::from_strs(&["a"]).unwrap();
        assert_eq!(Rsd.evaluate(&p).unwrap(), Assignment::permutation(&[0]).unwrap());
    }

    #[test]
    fn rejects_large_n() {
        let orders = ["a>b>c>d>e>f>g"; 7];
        let p = PreferenceProfile::from_strs(&orders).unwrap();
        assert!(matches!(Rsd.evaluate(&p), Err(Error::Capacity(_))));
    }

    #[test]
    fn serial_dictatorship_follows_priority() {
        let p = PreferenceProfile::from_strs(&["a>b>c", "a>c>b", "a>b>c"]).unwrap();
        assert_eq!(serial_dictatorship(&p, &[1, 0, 2]), vec![1, 0, 2]);
        let m = SerialDictatorship { priority: vec![0, 1, 2] }.evaluate(&p).unwrap();
        assert_eq!(m.entry(0, 0), &rat(1, 1));
    }
}

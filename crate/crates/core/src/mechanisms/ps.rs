use num_traits::{One, Signed, Zero};

use super::Mechanism;
use crate::assignment::Assignment;
use crate::error::Result;
use crate::profile::PreferenceProfile;
use crate::rational::{self, Rational};

/// Probabilistic Serial: simultaneous eating at unit speed.
///
/// Each agent eats from its favourite object with remaining supply. The
/// simulation jumps from one exhaustion event to the next, so event times and
/// shares stay exact.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ps;

impl Mechanism for Ps {
    fn name(&self) -> String {
        "ps".into()
    }

    fn evaluate(&self, profile: &PreferenceProfile) -> Result<Assignment> {
        let n = profile.n();
        let mut supply = vec![Rational::one(); n];
        let mut shares = vec![vec![Rational::zero(); n]; n];
        let mut clock = Rational::zero();
        while clock < Rational::one() {
            let eating: Vec<usize> = (0..n)
                .map(|i| {
                    profile
                        .order(i)
                        .ranking()
                        .iter()
                        .copied()
                        .find(|&j| supply[j].is_positive())
                        .expect("supply remains while time < 1")
                })
                .collect();
            let mut eaters = vec![0i64; n];
            for &j in &eating {
                eaters[j] += 1;
            }
            let mut step = Rational::one() - &clock;
            for j in 0..n {
                if eaters[j] > 0 {
                    let t = &supply[j] / rational::int(eaters[j]);
                    if t < step {
                        step = t;
                    }
                }
            }
            for (i, &j) in eating.iter().enumerate() {
                shares[i][j] += &step;
            }
            for j in 0..n {
                if eaters[j] > 0 {
                    supply[j] -= &step * rational::int(eaters[j]);
                }
            }
            clock += step;
        }
        Ok(Assignment::from_rows_unchecked(shares))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_preferences_give_uniform() {
        for n in 1..=5 {
            let order: String = (0..n).map(|j| ((b'a' + j as u8) as char).to_string()).collect::<Vec<_>>().join(">");
            let orders = vec![order.as_str(); n];
            let p = PreferenceProfile::from_strs(&orders).unwrap();
            assert_eq!(Ps.evaluate(&p).unwrap(), Assignment::uniform(n));
        }
    }

    #[test]
    fn opposed_preferences_give_top_choices() {
        let p = PreferenceProfile::from_strs(&["a>b", "b>a"]).unwrap();
        assert_eq!(Ps.evaluate(&p).unwrap(), Assignment::permutation(&[0, 1]).unwrap());
    }
}

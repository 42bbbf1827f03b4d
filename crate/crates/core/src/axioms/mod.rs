//! Checkers for the incentive, fairness and efficiency axioms.

mod efficiency;
mod fairness;
mod transitions;

pub use efficiency::{
    find_strict_dominator, is_expost_efficient, is_ordinally_efficient, pareto_undominated, trading_relation,
    EfficiencyCertificate, ExPostVerdict, TradingEdge, EXPOST_MAX_AGENTS,
};
pub use fairness::{check_anonymity, check_neutrality, check_ordinal_efficiency, check_symmetry};
pub use transitions::{
    check_transition_axioms, evaluate_transition, local_sp_holds, lower_invariant, swap_monotonic, upper_invariant,
    TransitionClauses,
};

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::assignment::Assignment;
use crate::codec::{format_matrix, format_profile};
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;
use crate::profile::{PreferenceOrder, PreferenceProfile, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    LocalSp,
    SwapMonotonicity,
    UpperInvariance,
    LowerInvariance,
    NonBossiness,
    Symmetry,
    Anonymity,
    Neutrality,
    OrdinalEfficiency,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::LocalSp,
        Axiom::SwapMonotonicity,
        Axiom::UpperInvariance,
        Axiom::LowerInvariance,
        Axiom::NonBossiness,
        Axiom::Symmetry,
        Axiom::Anonymity,
        Axiom::Neutrality,
        Axiom::OrdinalEfficiency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::LocalSp => "local-sp",
            Axiom::SwapMonotonicity => "swap-monotonicity",
            Axiom::UpperInvariance => "upper-invariance",
            Axiom::LowerInvariance => "lower-invariance",
            Axiom::NonBossiness => "non-bossiness",
            Axiom::Symmetry => "symmetry",
            Axiom::Anonymity => "anonymity",
            Axiom::Neutrality => "neutrality",
            Axiom::OrdinalEfficiency => "ordinal-efficiency",
        }
    }

    /// Whether the axiom quantifies over single-agent misreports.
    pub fn is_transition_axiom(self) -> bool {
        matches!(
            self,
            Axiom::LocalSp | Axiom::SwapMonotonicity | Axiom::UpperInvariance | Axiom::LowerInvariance | Axiom::NonBossiness
        )
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let alias = match key.as_str() {
            "sp" | "strategyproofness" => "local-sp",
            "sm" => "swap-monotonicity",
            "ui" => "upper-invariance",
            "li" => "lower-invariance",
            "nb" => "non-bossiness",
            "oe" | "efficiency" => "ordinal-efficiency",
            other => other,
        };
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == alias)
            .ok_or_else(|| Error::Input(format!("unknown axiom `{s}`")))
    }
}

/// A single agent's misreport: `misreport` differs from `profile` only in
/// `agent`'s order. `pair` is `(j, j')` with `j` above `j'` in the truthful
/// order when the two orders are adjacent, and `None` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub profile: PreferenceProfile,
    pub agent: usize,
    pub pair: Option<(usize, usize)>,
    pub misreport: PreferenceProfile,
}

impl Transition {
    /// Agent `agent` swaps the objects at positions `k` and `k + 1`.
    pub fn adjacent(profile: &PreferenceProfile, agent: usize, k: usize) -> Self {
        let (order, pair) = profile.order(agent).swap_at(k);
        Self { profile: profile.clone(), agent, pair: Some(pair), misreport: profile.with_order(agent, order) }
    }

    pub fn deviation(profile: &PreferenceProfile, agent: usize, order: PreferenceOrder) -> Self {
        let pair = profile.order(agent).adjacent_pair_to(&order);
        Self { profile: profile.clone(), agent, pair, misreport: profile.with_order(agent, order) }
    }

    /// All `n (n - 1)` adjacent transitions out of `profile`.
    pub fn all_adjacent(profile: &PreferenceProfile) -> Vec<Self> {
        let n = profile.n();
        (0..n).flat_map(|i| (0..n.saturating_sub(1)).map(move |k| (i, k))).map(|(i, k)| Self::adjacent(profile, i, k)).collect()
    }

    /// All `n (n! - 1)` single-agent deviations out of `profile`.
    pub fn all_deviations(profile: &PreferenceProfile) -> Vec<Self> {
        let orders = PreferenceOrder::all(profile.n());
        (0..profile.n())
            .flat_map(|i| {
                orders
                    .iter()
                    .filter(move |o| *o != profile.order(i))
                    .map(move |o| Self::deviation(profile, i, o.clone()))
            })
            .collect()
    }

    pub fn reversed(&self) -> Self {
        Self {
            profile: self.misreport.clone(),
            agent: self.agent,
            pair: self.pair.map(|(j, k)| (k, j)),
            misreport: self.profile.clone(),
        }
    }
}

/// Where checkers look.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    /// Every profile over the standard universe of size `n`.
    Exhaustive(usize),
    /// A fixed profile set; transitions are kept when both ends lie in it.
    Explicit(Vec<PreferenceProfile>),
    /// `count` profiles (or transitions) drawn uniformly from a seeded generator.
    Sampled { n: usize, count: usize, seed: u64 },
}

impl Domain {
    pub fn describe(&self) -> String {
        match self {
            Domain::Exhaustive(n) => format!("exhaustive n={n}"),
            Domain::Explicit(ps) => format!("explicit {} profiles", ps.len()),
            Domain::Sampled { n, count, seed } => format!("sampled n={n} count={count} seed={seed}"),
        }
    }

    fn explicit_set(&self) -> Option<HashSet<&PreferenceProfile>> {
        match self {
            Domain::Explicit(ps) => Some(ps.iter().collect()),
            _ => None,
        }
    }

    pub fn profiles(&self) -> Result<Vec<PreferenceProfile>> {
        match self {
            Domain::Exhaustive(n) => PreferenceProfile::all(*n),
            Domain::Explicit(ps) => {
                let mut seen = HashSet::new();
                Ok(ps.iter().filter(|p| seen.insert(*p)).cloned().collect())
            }
            Domain::Sampled { n, count, seed } => {
                let universe = Arc::new(Universe::standard(*n)?);
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*count).map(|_| random_profile(&universe, &mut rng)).collect()
            }
        }
    }

    /// Adjacent transitions (or all deviations when `global`).
    pub fn transitions(&self, global: bool) -> Result<Vec<Transition>> {
        let expand = |p: &PreferenceProfile| if global { Transition::all_deviations(p) } else { Transition::all_adjacent(p) };
        match self {
            Domain::Exhaustive(_) => Ok(self.profiles()?.iter().flat_map(expand).collect()),
            Domain::Explicit(_) => {
                let set = self.explicit_set().expect("explicit");
                Ok(self.profiles()?.iter().flat_map(expand).filter(|t| set.contains(&t.misreport)).collect())
            }
            Domain::Sampled { n, count, seed } => {
                let universe = Arc::new(Universe::standard(*n)?);
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut out = Vec::with_capacity(*count);
                for _ in 0..*count {
                    let p = random_profile(&universe, &mut rng)?;
                    let agent = rng.gen_range(0..*n);
                    if global {
                        let mut order = p.order(agent).clone();
                        while order == *p.order(agent) {
                            order = random_order(*n, &mut rng);
                        }
                        out.push(Transition::deviation(&p, agent, order));
                    } else {
                        let k = rng.gen_range(0..n - 1);
                        out.push(Transition::adjacent(&p, agent, k));
                    }
                }
                Ok(out)
            }
        }
    }
}

fn random_order(n: usize, rng: &mut ChaCha8Rng) -> PreferenceOrder {
    let mut ranking: Vec<usize> = (0..n).collect();
    ranking.shuffle(rng);
    PreferenceOrder::new(ranking).expect("permutation")
}

fn random_profile(universe: &Arc<Universe>, rng: &mut ChaCha8Rng) -> Result<PreferenceProfile> {
    let n = universe.n();
    PreferenceProfile::new(universe.clone(), (0..n).map(|_| random_order(n, rng)).collect())
}

/// Mechanism outputs at a set of profiles, evaluated in parallel.
pub(crate) struct Outputs(HashMap<PreferenceProfile, Assignment>);

impl Outputs {
    pub(crate) fn evaluate<'a, M: Mechanism + ?Sized>(
        mech: &M,
        profiles: impl IntoIterator<Item = &'a PreferenceProfile>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        let unique: Vec<&PreferenceProfile> = profiles.into_iter().filter(|p| seen.insert(*p)).collect();
        let values = unique
            .par_iter()
            .map(|p| {
                if !mech.in_domain(p) {
                    return Err(Error::Domain(format!("profile outside the domain of {}", mech.name())));
                }
                mech.evaluate(p)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self(unique.into_iter().cloned().zip(values).collect()))
    }

    pub(crate) fn get(&self, p: &PreferenceProfile) -> &Assignment {
        &self.0[p]
    }
}

/// A witness against an axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub profile: PreferenceProfile,
    pub other: Option<PreferenceProfile>,
    pub agent: Option<usize>,
    pub clause: String,
    /// Offending `(agent, object)` entries.
    pub entries: Vec<(usize, usize)>,
    pub matrices: Vec<Assignment>,
}

impl Counterexample {
    pub fn to_json(&self) -> Value {
        let u = self.profile.universe();
        json!({
            "profile": format_profile(&self.profile),
            "other": self.other.as_ref().map(format_profile),
            "agent": self.agent.map(|i| u.agent(i).to_string()),
            "clause": self.clause,
            "entries": self.entries.iter().map(|&(i, j)| format!("({},{})", u.agent(i), u.object(j))).collect::<Vec<_>>(),
            "matrices": self.matrices.iter().map(|m| format_matrix(u, m)).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.profile.universe();
        write!(f, "{}", self.clause)?;
        if let Some(i) = self.agent {
            write!(f, " [agent {}]", u.agent(i))?;
        }
        if !self.entries.is_empty() {
            let e: Vec<String> = self.entries.iter().map(|&(i, j)| format!("({},{})", u.agent(i), u.object(j))).collect();
            write!(f, " entries {}", e.join(" "))?;
        }
        writeln!(f)?;
        writeln!(f, "  at profile:")?;
        for line in format_profile(&self.profile).lines() {
            writeln!(f, "    {line}")?;
        }
        if let Some(o) = &self.other {
            writeln!(f, "  versus:")?;
            for line in format_profile(o).lines() {
                writeln!(f, "    {line}")?;
            }
        }
        for m in &self.matrices {
            writeln!(f, "  matrix:")?;
            for line in format_matrix(u, m).lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub domain: String,
    pub holds: bool,
    pub profiles: usize,
    /// Transitions examined, for transition axioms.
    pub transitions: Option<usize>,
    /// Number of failing instances; only the first few are kept as counterexamples.
    pub violations: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl AxiomVerdict {
    pub(crate) fn from_results(
        axiom: Axiom,
        domain: &Domain,
        profiles: usize,
        transitions: Option<usize>,
        failures: impl IntoIterator<Item = Counterexample>,
        keep: usize,
    ) -> Self {
        let mut violations = 0;
        let mut counterexamples = Vec::new();
        for c in failures {
            violations += 1;
            if counterexamples.len() < keep {
                counterexamples.push(c);
            }
        }
        Self { axiom, domain: domain.describe(), holds: violations == 0, profiles, transitions, violations, counterexamples }
    }

    pub fn summary(&self) -> String {
        let scope = match self.transitions {
            Some(t) => format!("{} profiles, {t} transitions", self.profiles),
            None => format!("{} profiles", self.profiles),
        };
        if self.holds {
            format!("{}: HOLDS ({scope})", self.axiom)
        } else {
            format!("{}: VIOLATED ({} violations; {scope})", self.axiom, self.violations)
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "axiom": self.axiom.name(),
            "domain": self.domain,
            "holds": self.holds,
            "profiles": self.profiles,
            "transitions": self.transitions,
            "violations": self.violations,
            "counterexamples": self.counterexamples.iter().map(Counterexample::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for AxiomVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        for c in &self.counterexamples {
            write!(f, "  {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Quantify strategyproofness and non-bossiness over all misreports instead
    /// of adjacent ones.
    pub global: bool,
    pub max_counterexamples: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { global: false, max_counterexamples: 5 }
    }
}

/// Runs every requested axiom, in the given order.
pub fn check_axioms<M: Mechanism + ?Sized>(
    mech: &M,
    domain: &Domain,
    axioms: &[Axiom],
    options: &CheckOptions,
) -> Result<Vec<AxiomVerdict>> {
    let transition_axioms: Vec<Axiom> = axioms.iter().copied().filter(|a| a.is_transition_axiom()).collect();
    let mut by_axiom: HashMap<Axiom, AxiomVerdict> = HashMap::new();
    if !transition_axioms.is_empty() {
        for v in check_transition_axioms(mech, domain, &transition_axioms, options)? {
            by_axiom.insert(v.axiom, v);
        }
    }
    for &a in axioms {
        if by_axiom.contains_key(&a) {
            continue;
        }
        let v = match a {
            Axiom::Symmetry => check_symmetry(mech, domain, options)?,
            Axiom::Anonymity => check_anonymity(mech, domain, options)?,
            Axiom::Neutrality => check_neutrality(mech, domain, options)?,
            Axiom::OrdinalEfficiency => check_ordinal_efficiency(mech, domain, options)?,
            _ => unreachable!("transition axioms handled above"),
        };
        by_axiom.insert(a, v);
    }
    let mut seen = HashSet::new();
    Ok(axioms.iter().filter(|a| seen.insert(**a)).map(|a| by_axiom[a].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axiom_names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(a.name().parse::<Axiom>().unwrap(), a);
        }
        assert_eq!("UI".parse::<Axiom>().unwrap(), Axiom::UpperInvariance);
        assert!("honesty".parse::<Axiom>().is_err());
    }

    #[test]
    fn exhaustive_counts() {
        let d = Domain::Exhaustive(3);
        assert_eq!(d.profiles().unwrap().len(), 216);
        assert_eq!(d.transitions(false).unwrap().len(), 1296);
        assert_eq!(d.transitions(true).unwrap().len(), 216 * 15);
    }

    #[test]
    fn sampled_domain_is_deterministic() {
        let d = Domain::Sampled { n: 4, count: 50, seed: 7 };
        assert_eq!(d.transitions(false).unwrap(), d.transitions(false).unwrap());
        assert_eq!(d.profiles().unwrap().len(), 50);
        let other = Domain::Sampled { n: 4, count: 50, seed: 8 };
        assert_ne!(d.profiles().unwrap(), other.profiles().unwrap());
    }

    #[test]
    fn transitions_reverse() {
        let p = PreferenceProfile::from_strs(&["abc", "bca", "cab"]).unwrap();
        for t in Transition::all_adjacent(&p) {
            let r = t.reversed();
            assert_eq!(r.misreport, p);
            let (j, k) = t.pair.unwrap();
            assert_eq!(r.profile.adjacent_transition_to(&p), Some((t.agent, (k, j))));
        }
    }
}

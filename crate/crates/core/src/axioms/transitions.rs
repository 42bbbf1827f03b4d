//! Strategyproofness and the axioms defined by single-agent adjacent swaps.

use rayon::prelude::*;

use super::{Axiom, AxiomVerdict, CheckOptions, Counterexample, Domain, Outputs, Transition};
use crate::assignment::Assignment;
use crate::dominance::fosd_compare;
use crate::error::Result;
use crate::mechanisms::Mechanism;
use crate::profile::PreferenceOrder;
use crate::rational::Rational;

/// The truthful row first order-stochastically dominates the misreport row.
pub fn local_sp_holds(truthful: &[Rational], misreport: &[Rational], order: &PreferenceOrder) -> bool {
    fosd_compare(truthful, misreport, order).map(|v| v.weakly()).unwrap_or(false)
}

/// Equal rows, or strictly more of `j` and strictly less of `j2` under the
/// report ranking `j` above `j2`.
pub fn swap_monotonic(truthful: &[Rational], misreport: &[Rational], j: usize, j2: usize) -> bool {
    truthful == misreport || (truthful[j] > misreport[j] && truthful[j2] < misreport[j2])
}

/// Entries on the upper contour set of `j` are unchanged. Returns the objects
/// where they differ.
pub fn upper_invariant(truthful: &[Rational], misreport: &[Rational], order: &PreferenceOrder, j: usize) -> Vec<usize> {
    let rank = order.rank_of(j);
    order.ranking()[..rank].iter().copied().filter(|&k| truthful[k] != misreport[k]).collect()
}

/// Entries on the lower contour set of `j2` are unchanged. Returns the objects
/// where they differ.
pub fn lower_invariant(truthful: &[Rational], misreport: &[Rational], order: &PreferenceOrder, j2: usize) -> Vec<usize> {
    let rank = order.rank_of(j2);
    order.ranking()[rank + 1..].iter().copied().filter(|&k| truthful[k] != misreport[k]).collect()
}

/// Clause outcomes at one transition. Swap-based clauses are `None` when the
/// misreport is not adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitionClauses {
    pub local_sp: bool,
    /// Strategyproofness for the reverse move, judged at the misreported order.
    pub local_sp_reverse: bool,
    pub swap_monotonicity: Option<bool>,
    pub upper_invariance: Option<bool>,
    pub lower_invariance: Option<bool>,
    pub non_bossiness: bool,
}

pub fn evaluate_transition(t: &Transition, x: &Assignment, y: &Assignment) -> TransitionClauses {
    let i = t.agent;
    let order = t.profile.order(i);
    let (xi, yi) = (x.row(i), y.row(i));
    let swap = t.pair.map(|(j, j2)| {
        (swap_monotonic(xi, yi, j, j2), upper_invariant(xi, yi, order, j).is_empty(), lower_invariant(xi, yi, order, j2).is_empty())
    });
    TransitionClauses {
        local_sp: local_sp_holds(xi, yi, order),
        local_sp_reverse: local_sp_holds(yi, xi, t.misreport.order(i)),
        swap_monotonicity: swap.map(|s| s.0),
        upper_invariance: swap.map(|s| s.1),
        lower_invariance: swap.map(|s| s.2),
        non_bossiness: xi != yi || x == y,
    }
}

fn violation(axiom: Axiom, t: &Transition, x: &Assignment, y: &Assignment) -> Option<Counterexample> {
    let i = t.agent;
    let order = t.profile.order(i);
    let (xi, yi) = (x.row(i), y.row(i));
    let u = t.profile.universe();
    let pair = t.pair.map(|(j, j2)| format!("({},{})", u.object(j), u.object(j2))).unwrap_or_else(|| "non-adjacent".into());
    let (clause, entries) = match axiom {
        Axiom::LocalSp => {
            let v = fosd_compare(xi, yi, order).ok()?;
            if v.weakly() {
                return None;
            }
            let at = v.witness.map(|w| w.object).into_iter().map(|j| (i, j)).collect();
            (format!("misreport {pair} is first order-stochastically profitable"), at)
        }
        Axiom::SwapMonotonicity => {
            let (j, j2) = t.pair?;
            if swap_monotonic(xi, yi, j, j2) {
                return None;
            }
            (format!("swap {pair} changes the row without moving probability from {} to {}", u.object(j), u.object(j2)), vec![(i, j), (i, j2)])
        }
        Axiom::UpperInvariance => {
            let (j, _) = t.pair?;
            let bad = upper_invariant(xi, yi, order, j);
            if bad.is_empty() {
                return None;
            }
            (format!("swap {pair} changes the upper contour set of {}", u.object(j)), bad.into_iter().map(|k| (i, k)).collect())
        }
        Axiom::LowerInvariance => {
            let (_, j2) = t.pair?;
            let bad = lower_invariant(xi, yi, order, j2);
            if bad.is_empty() {
                return None;
            }
            (format!("swap {pair} changes the lower contour set of {}", u.object(j2)), bad.into_iter().map(|k| (i, k)).collect())
        }
        Axiom::NonBossiness => {
            if xi != yi || x == y {
                return None;
            }
            let n = x.n();
            let changed = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| x.entry(a, b) != y.entry(a, b)).collect();
            (format!("misreport {pair} keeps the agent's row but changes others"), changed)
        }
        _ => return None,
    };
    Some(Counterexample {
        profile: t.profile.clone(),
        other: Some(t.misreport.clone()),
        agent: Some(i),
        clause,
        entries,
        matrices: vec![x.clone(), y.clone()],
    })
}

/// Checks each requested transition axiom at every transition of the domain.
/// Strategyproofness and non-bossiness range over all misreports when
/// `options.global` is set; the swap axioms always use adjacent transitions.
pub fn check_transition_axioms<M: Mechanism + ?Sized>(
    mech: &M,
    domain: &Domain,
    axioms: &[Axiom],
    options: &CheckOptions,
) -> Result<Vec<AxiomVerdict>> {
    let profiles = domain.profiles()?;
    let local = domain.transitions(false)?;
    let global = if options.global && axioms.iter().any(|a| matches!(a, Axiom::LocalSp | Axiom::NonBossiness)) {
        Some(domain.transitions(true)?)
    } else {
        None
    };
    let outputs = Outputs::evaluate(
        mech,
        profiles
            .iter()
            .chain(local.iter().flat_map(|t| [&t.profile, &t.misreport]))
            .chain(global.iter().flatten().flat_map(|t| [&t.profile, &t.misreport])),
    )?;
    let profile_count = match domain {
        Domain::Sampled { .. } => local.len(),
        _ => profiles.len(),
    };
    let mut verdicts = Vec::new();
    for &axiom in axioms {
        let ts = match (&global, axiom) {
            (Some(g), Axiom::LocalSp | Axiom::NonBossiness) => g,
            _ => &local,
        };
        let failures: Vec<Option<Counterexample>> = ts
            .par_iter()
            .map(|t| violation(axiom, t, outputs.get(&t.profile), outputs.get(&t.misreport)))
            .collect();
        verdicts.push(AxiomVerdict::from_results(
            axiom,
            domain,
            profile_count,
            Some(ts.len()),
            failures.into_iter().flatten(),
            options.max_counterexamples,
        ));
    }
    Ok(verdicts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanisms::{Mechanism, Ps, TableMechanism};
    use crate::profile::PreferenceProfile;

    #[test]
    fn upper_invariance_between_first_two_profiles() {
        let one = PreferenceProfile::from_strs(&["abcd"; 4]).unwrap();
        let two = PreferenceProfile::from_strs(&["abcd", "abcd", "abcd", "abdc"]).unwrap();
        let table = TableMechanism::tabulate(&Ps, &[one.clone(), two.clone()]).unwrap();
        let t = Transition::adjacent(&one, 3, 2);
        assert_eq!(t.misreport, two);
        let c = evaluate_transition(&t, &table.evaluate(&one).unwrap(), &table.evaluate(&two).unwrap());
        assert_eq!(c.upper_invariance, Some(true));
        // L(d) under a>b>c>d is empty, so lower invariance holds vacuously
        assert_eq!(c.lower_invariance, Some(true));
        let verdicts = check_transition_axioms(
            &table,
            &Domain::Explicit(vec![one, two]),
            &[Axiom::UpperInvariance],
            &CheckOptions::default(),
        )
        .unwrap();
        assert!(verdicts[0].holds);
        assert_eq!(verdicts[0].transitions, Some(2));
    }

    #[test]
    fn swap_monotonicity_direction() {
        use crate::rational::rat;
        let x = [rat(1, 2), rat(1, 2)];
        let y = [rat(1, 4), rat(3, 4)];
        assert!(swap_monotonic(&x, &y, 0, 1));
        assert!(!swap_monotonic(&y, &x, 0, 1));
        assert!(swap_monotonic(&x, &x, 0, 1));
    }
}

//! Independent feasibility search over the profiles of a proof script.
//!
//! Every entry of every profile's matrix is an unknown. Equality axioms become
//! linear equalities; ordinal efficiency and swap monotonicity become
//! disjunctions explored depth first, each node checked by an exact LP.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::certify::efficient_faces;
use super::script::builtin_script;
use crate::assignment::Assignment;
use crate::codec::Document;
use crate::axioms::{evaluate_transition, is_ordinally_efficient, Axiom, Transition};
use crate::error::{Error, Result};
use crate::polytope::{EqualitySystem, LinearSystem, LpOutcome, Sense};
use crate::profile::{permutations, PreferenceOrder, PreferenceProfile, Universe};
use crate::rational::Rational;

pub const DEFAULT_BRANCH_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub drop: Vec<Axiom>,
    pub add: Vec<Axiom>,
    pub branch_limit: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { drop: Vec::new(), add: Vec::new(), branch_limit: DEFAULT_BRANCH_LIMIT }
    }
}

/// Why every branch failed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub branches: u64,
    pub lp_calls: u64,
    /// Branches whose equalities were inconsistent.
    pub equality_conflicts: u64,
    /// Branches refuted by an LP whose Farkas multipliers were re-checked.
    pub farkas_refutations: u64,
    /// Branches where the strict inequalities could not hold simultaneously.
    pub zero_slack: u64,
}

#[derive(Debug, Clone)]
pub enum SearchVerdict {
    Infeasible(InfeasibilityCertificate),
    /// Matrices on every profile of the set satisfying all constraints.
    Witness(Vec<(PreferenceProfile, Assignment)>),
    Inconclusive { branches: u64 },
}

impl SearchVerdict {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, SearchVerdict::Infeasible(_))
    }

    pub fn witness(&self) -> Option<&[(PreferenceProfile, Assignment)]> {
        match self {
            SearchVerdict::Witness(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub theorem: u8,
    pub axioms: Vec<Axiom>,
    pub profiles: Vec<(String, PreferenceProfile)>,
    pub edges: usize,
    pub variables: usize,
    pub decisions: usize,
    pub verdict: SearchVerdict,
}

impl SearchReport {
    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            SearchVerdict::Infeasible(c) => json!({
                "kind": "infeasible",
                "branches": c.branches,
                "lp_calls": c.lp_calls,
                "equality_conflicts": c.equality_conflicts,
                "farkas_refutations": c.farkas_refutations,
                "zero_slack": c.zero_slack,
            }),
            SearchVerdict::Inconclusive { branches } => json!({ "kind": "inconclusive", "branches": branches }),
            SearchVerdict::Witness(fragment) => json!({
                "kind": "witness",
                "fragment": self
                    .profiles
                    .iter()
                    .zip(fragment)
                    .map(|((name, _), (p, x))| json!({ "name": name, "document": Document::new(p.universe(), Some(p), Some(x)) }))
                    .collect::<Vec<_>>(),
            }),
        };
        json!({
            "theorem": self.theorem,
            "axioms": self.axioms.iter().map(|a| a.name()).collect::<Vec<_>>(),
            "profiles": self.profiles.len(),
            "edges": self.edges,
            "variables": self.variables,
            "decisions": self.decisions,
            "verdict": verdict,
        })
    }
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.axioms.iter().map(|a| a.name()).collect();
        writeln!(f, "theorem {} axioms: {}", self.theorem, names.join(", "))?;
        writeln!(
            f,
            "{} profiles, {} adjacent pairs, {} unknowns, {} branching points",
            self.profiles.len(),
            self.edges,
            self.variables,
            self.decisions
        )?;
        match &self.verdict {
            SearchVerdict::Infeasible(c) => writeln!(
                f,
                "INFEASIBLE: {} branches, {} LPs ({} equality conflicts, {} Farkas refutations, {} zero-slack optima)",
                c.branches, c.lp_calls, c.equality_conflicts, c.farkas_refutations, c.zero_slack
            ),
            SearchVerdict::Inconclusive { branches } => writeln!(f, "INCONCLUSIVE: branch limit reached after {branches} branches"),
            SearchVerdict::Witness(fragment) => {
                writeln!(f, "WITNESS: a matrix for every profile satisfies all constraints")?;
                for ((name, _), (p, x)) in self.profiles.iter().zip(fragment) {
                    writeln!(f, "\nprofile {name}: {p}")?;
                    for row in x.rows() {
                        let cells: Vec<String> = row.iter().map(crate::rational::format).collect();
                        writeln!(f, "  {}", cells.join("  "))?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// The axiom families of a built-in theorem.
pub fn theorem_axioms(theorem: u8) -> Result<Vec<Axiom>> {
    builtin_script(theorem)?.axioms.iter().map(|a| a.parse::<Axiom>()).collect()
}

/// Local strategyproofness is searched through its swap decomposition.
fn expand(axioms: &[Axiom]) -> Vec<Axiom> {
    let mut out: Vec<Axiom> = Vec::new();
    for &a in axioms {
        let parts: &[Axiom] = if a == Axiom::LocalSp {
            &[Axiom::SwapMonotonicity, Axiom::UpperInvariance, Axiom::LowerInvariance]
        } else {
            std::slice::from_ref(&a)
        };
        for &p in parts {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out.sort_by_key(|a| Axiom::ALL.iter().position(|b| b == a));
    out
}

type Terms = Vec<(usize, Rational)>;

#[derive(Debug, Clone, Default)]
struct Choice {
    equalities: Vec<(Terms, Rational)>,
    /// Linear forms that must be strictly positive.
    strict: Vec<Terms>,
}

struct Edge {
    from: usize,
    to: usize,
    agent: usize,
    upper: usize,
    lower: usize,
}

struct Problem {
    n: usize,
    num_vars: usize,
    base: Vec<(Terms, Rational)>,
    decisions: Vec<Vec<Choice>>,
    limit: u64,
    branches: AtomicU64,
    lp_calls: AtomicU64,
    conflicts: AtomicU64,
    farkas: AtomicU64,
    zero_slack: AtomicU64,
}

enum Explore {
    Infeasible,
    Found(Vec<Rational>),
    Limit,
}

fn diff(a: usize, b: usize) -> Terms {
    vec![(a, Rational::one()), (b, -Rational::one())]
}

impl Problem {
    fn var(&self, p: usize, i: usize, j: usize) -> usize {
        p * self.n * self.n + i * self.n + j
    }

    /// Checks the branch. `Some(point)` when feasible.
    fn feasible(&self, store: &EqualitySystem, strict: &[Terms]) -> Option<Vec<Rational>> {
        if store.is_inconsistent() {
            self.conflicts.fetch_add(1, Ordering::Relaxed);
            return None;
        }
        let exprs: Vec<_> = (0..self.num_vars).map(|v| store.expression(v)).collect();
        if exprs.iter().any(|e| e.is_constant() && e.constant.is_negative()) {
            self.conflicts.fetch_add(1, Ordering::Relaxed);
            return None;
        }
        let free: Vec<usize> = (0..self.num_vars).filter(|&v| !store.is_pivot(v)).collect();
        let mut col = vec![usize::MAX; self.num_vars];
        for (c, &v) in free.iter().enumerate() {
            col[v] = c;
        }
        let mut lp = LinearSystem::new(free.len());
        let substitute = |terms: &Terms| -> (Rational, Terms) {
            let mut constant = Rational::zero();
            let mut acc = vec![Rational::zero(); free.len()];
            for (v, a) in terms {
                constant += a * &exprs[*v].constant;
                for (f, c) in &exprs[*v].terms {
                    acc[col[*f]] += a * c;
                }
            }
            (constant, acc.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
        };
        // rows with a nonnegative constant and coefficients follow from the
        // free columns' own bounds
        let mut rows: BTreeSet<(Vec<(usize, Rational)>, Rational)> = BTreeSet::new();
        for (v, e) in exprs.iter().enumerate() {
            if store.is_pivot(v) && !e.is_constant() {
                if !e.constant.is_negative() && e.terms.iter().all(|(_, c)| c.is_positive()) {
                    continue;
                }
                let (k, t) = substitute(&vec![(v, Rational::one())]);
                rows.insert((t, k));
            }
        }
        for (t, k) in rows {
            lp.add_ge(t, -k).expect("columns in range");
        }
        let slack = (!strict.is_empty()).then(|| lp.add_var());
        if let Some(s) = slack {
            lp.add_le(vec![(s, Rational::one())], Rational::one()).expect("in range");
            for form in strict {
                let (k, mut t) = substitute(form);
                t.push((s, -Rational::one()));
                lp.add_ge(t, -k).expect("in range");
            }
            lp.set_objective(Sense::Maximize, vec![(s, Rational::one())]).expect("in range");
        }
        self.lp_calls.fetch_add(1, Ordering::Relaxed);
        match lp.solve() {
            LpOutcome::Infeasible(cert) => {
                assert!(lp.verify_infeasibility(&cert), "Farkas certificate must verify");
                self.farkas.fetch_add(1, Ordering::Relaxed);
                None
            }
            LpOutcome::Optimal { value, .. } if slack.is_some() && !value.is_positive() => {
                self.zero_slack.fetch_add(1, Ordering::Relaxed);
                None
            }
            LpOutcome::Optimal { point, .. } => Some(
                exprs
                    .iter()
                    .map(|e| {
                        let mut x = e.constant.clone();
                        for (f, c) in &e.terms {
                            x += c * &point[col[*f]];
                        }
                        x
                    })
                    .collect(),
            ),
            LpOutcome::Unbounded => unreachable!("the slack is bounded"),
        }
    }

    /// The branch after taking `choice`, unless the equalities alone refute it.
    fn take(&self, store: &EqualitySystem, strict: &[Terms], choice: &Choice) -> Option<(EqualitySystem, Vec<Terms>)> {
        let mut store = store.clone();
        for (t, r) in &choice.equalities {
            store.insert(t, r.clone());
        }
        if store.is_inconsistent() {
            return None;
        }
        for (t, _) in &choice.equalities {
            for (v, _) in t {
                if store.value(*v).is_some_and(|x| x.is_negative()) {
                    return None;
                }
            }
        }
        let mut strict = strict.to_vec();
        strict.extend(choice.strict.iter().cloned());
        for form in &choice.strict {
            let mut constant = Rational::zero();
            let mut open = false;
            for (v, a) in form {
                match store.value(*v) {
                    Some(x) => constant += a * x,
                    None => open = true,
                }
            }
            if !open && !constant.is_positive() {
                return None;
            }
        }
        Some((store, strict))
    }

    /// Cheap screen: no single equality or strict form of the choice is refuted.
    fn viable(&self, store: &EqualitySystem, choice: &Choice) -> bool {
        if choice.equalities.iter().any(|(t, r)| store.contradicts(t, r)) {
            return false;
        }
        choice.strict.iter().all(|form| {
            let mut constant = Rational::zero();
            for (v, a) in form {
                match store.value(*v) {
                    Some(x) => constant += a * x,
                    None => return true,
                }
            }
            constant.is_positive()
        })
    }

    /// Depth-first search. At each node the open decision with the fewest
    /// surviving options is branched on; single survivors are taken at once.
    fn explore(&self, mut open: Vec<usize>, mut store: EqualitySystem, mut strict: Vec<Terms>, depth: usize) -> Explore {
        if self.branches.fetch_add(1, Ordering::Relaxed) >= self.limit {
            return Explore::Limit;
        }
        let branches = loop {
            if open.is_empty() {
                return match self.feasible(&store, &strict) {
                    Some(point) => Explore::Found(point),
                    None => Explore::Infeasible,
                };
            }
            let mut best: Option<(usize, usize)> = None;
            for (k, &d) in open.iter().enumerate() {
                let count = self.decisions[d].iter().filter(|c| self.viable(&store, c)).count();
                if best.is_none_or(|(_, b)| count < b) {
                    best = Some((k, count));
                    if count <= 1 {
                        break;
                    }
                }
            }
            let (k, _) = best.expect("open decisions");
            let d = open.remove(k);
            let mut survivors: Vec<_> = self.decisions[d].iter().filter_map(|c| self.take(&store, &strict, c)).collect();
            match survivors.len() {
                0 => {
                    self.conflicts.fetch_add(1, Ordering::Relaxed);
                    return Explore::Infeasible;
                }
                1 => (store, strict) = survivors.pop().expect("one survivor"),
                _ => {
                    if self.feasible(&store, &strict).is_none() {
                        return Explore::Infeasible;
                    }
                    break survivors;
                }
            }
        };
        let go = |(s, t): (EqualitySystem, Vec<Terms>)| self.explore(open.clone(), s, t, depth + 1);
        let results: Vec<Explore> = if depth < 4 {
            branches.into_par_iter().map(go).collect()
        } else {
            let mut out = Vec::new();
            for b in branches {
                let r = go(b);
                let stop = !matches!(r, Explore::Infeasible);
                out.push(r);
                if stop {
                    break;
                }
            }
            out
        };
        let mut limit = false;
        for r in results {
            match r {
                Explore::Found(p) => return Explore::Found(p),
                Explore::Limit => limit = true,
                Explore::Infeasible => {}
            }
        }
        if limit {
            Explore::Limit
        } else {
            Explore::Infeasible
        }
    }
}

fn distinct_profiles(theorem: u8) -> Result<Vec<(String, PreferenceProfile)>> {
    let script = builtin_script(theorem)?;
    let universe = Arc::new(Universe::new(script.agents.clone(), script.objects.clone())?);
    let mut out: Vec<(String, PreferenceProfile)> = Vec::new();
    for node in &script.nodes {
        let orders = node.profile.iter().map(|o| PreferenceOrder::parse(o, &universe)).collect::<Result<Vec<_>>>()?;
        let p = PreferenceProfile::new(universe.clone(), orders)?;
        if !out.iter().any(|(_, q)| *q == p) {
            out.push((node.name.clone(), p));
        }
    }
    Ok(out)
}

fn adjacent_edges(profiles: &[PreferenceProfile]) -> Vec<Edge> {
    let mut edges = Vec::new();
    for to in 0..profiles.len() {
        for from in 0..to {
            if let Some((agent, (upper, lower))) = profiles[from].adjacent_transition_to(&profiles[to]) {
                edges.push(Edge { from, to, agent, upper, lower });
            }
        }
    }
    edges
}

/// Searches for matrices on the theorem's profiles satisfying its axioms,
/// adjusted by `options`.
pub fn independent_search(theorem: u8, options: &SearchOptions) -> Result<SearchReport> {
    let base_axioms = theorem_axioms(theorem)?;
    let mut axioms: Vec<Axiom> = base_axioms.into_iter().filter(|a| !options.drop.contains(a)).collect();
    axioms.extend(options.add.iter().copied());
    let mut axioms = expand(&axioms);
    for d in &options.drop {
        axioms.retain(|a| a != d);
    }
    let named = distinct_profiles(theorem)?;
    let profiles: Vec<PreferenceProfile> = named.iter().map(|(_, p)| p.clone()).collect();
    let n = profiles[0].n();
    let edges = adjacent_edges(&profiles);
    let has = |a: Axiom| axioms.contains(&a);
    let mut problem = Problem {
        n,
        num_vars: profiles.len() * n * n,
        base: Vec::new(),
        decisions: Vec::new(),
        limit: options.branch_limit,
        branches: AtomicU64::new(0),
        lp_calls: AtomicU64::new(0),
        conflicts: AtomicU64::new(0),
        farkas: AtomicU64::new(0),
        zero_slack: AtomicU64::new(0),
    };
    let mut base = Vec::new();
    for p in 0..profiles.len() {
        for a in 0..n {
            base.push(((0..n).map(|j| (problem.var(p, a, j), Rational::one())).collect(), Rational::one()));
            base.push(((0..n).map(|i| (problem.var(p, i, a), Rational::one())).collect(), Rational::one()));
        }
    }
    let find = |q: &PreferenceProfile| profiles.iter().position(|r| r == q);
    for (p, profile) in profiles.iter().enumerate() {
        if has(Axiom::Symmetry) {
            for i in 0..n {
                for i2 in i + 1..n {
                    if profile.order(i) == profile.order(i2) {
                        base.extend((0..n).map(|j| (diff(problem.var(p, i, j), problem.var(p, i2, j)), Rational::zero())));
                    }
                }
            }
        }
        for perm in permutations(n) {
            if has(Axiom::Anonymity) {
                if let Some(q) = find(&profile.permute_agents(&perm)) {
                    for i in 0..n {
                        base.extend((0..n).map(|j| (diff(problem.var(p, i, j), problem.var(q, perm[i], j)), Rational::zero())));
                    }
                }
            }
            if has(Axiom::Neutrality) {
                if let Some(q) = find(&profile.permute_objects(&perm)) {
                    for i in 0..n {
                        base.extend((0..n).map(|j| (diff(problem.var(p, i, j), problem.var(q, i, perm[j])), Rational::zero())));
                    }
                }
            }
        }
    }
    for e in &edges {
        let order = profiles[e.from].order(e.agent);
        let (above, _) = order.contour_sets(e.upper)?;
        let (_, below) = order.contour_sets(e.lower)?;
        let mut carried = Vec::new();
        if has(Axiom::UpperInvariance) {
            carried.extend(above);
        }
        if has(Axiom::LowerInvariance) {
            carried.extend(below);
        }
        for j in carried {
            base.push((diff(problem.var(e.from, e.agent, j), problem.var(e.to, e.agent, j)), Rational::zero()));
        }
    }
    let mut decisions: Vec<Vec<Choice>> = Vec::new();
    for p in 0..profiles.len() {
        // efficiency at an anonymity or neutrality image follows from the original
        let image = (0..p).any(|q| {
            permutations(n).iter().any(|perm| {
                (has(Axiom::Anonymity) && profiles[q].permute_agents(perm) == profiles[p])
                    || (has(Axiom::Neutrality) && profiles[q].permute_objects(perm) == profiles[p])
            })
        });
        if has(Axiom::OrdinalEfficiency) && !image {
            let faces = efficient_faces(&profiles[p]);
            let choices: Vec<Choice> = faces
                .iter()
                .map(|z| Choice {
                    equalities: z.iter().map(|&(i, k)| (vec![(problem.var(p, i, k), Rational::one())], Rational::zero())).collect(),
                    strict: Vec::new(),
                })
                .collect();
            if choices.len() == 1 {
                base.extend(choices[0].equalities.iter().cloned());
            } else {
                decisions.push(choices);
            }
        }
        for e in edges.iter().filter(|e| e.to == p) {
            let (sm, nb) = (has(Axiom::SwapMonotonicity), has(Axiom::NonBossiness));
            if !sm && !nb {
                continue;
            }
            let row_equal: Vec<(Terms, Rational)> =
                (0..n).map(|j| (diff(problem.var(e.from, e.agent, j), problem.var(e.to, e.agent, j)), Rational::zero())).collect();
            let matrix_equal: Vec<(Terms, Rational)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| (diff(problem.var(e.from, i, j), problem.var(e.to, i, j)), Rational::zero()))
                .collect();
            let unchanged = Choice { equalities: if nb { matrix_equal } else { row_equal }, strict: Vec::new() };
            let mut choices = vec![unchanged];
            if sm {
                choices.push(Choice {
                    equalities: Vec::new(),
                    strict: vec![
                        diff(problem.var(e.from, e.agent, e.upper), problem.var(e.to, e.agent, e.upper)),
                        diff(problem.var(e.to, e.agent, e.lower), problem.var(e.from, e.agent, e.lower)),
                    ],
                });
            } else {
                for j in 0..n {
                    choices.push(Choice { equalities: Vec::new(), strict: vec![diff(problem.var(e.from, e.agent, j), problem.var(e.to, e.agent, j))] });
                    choices.push(Choice { equalities: Vec::new(), strict: vec![diff(problem.var(e.to, e.agent, j), problem.var(e.from, e.agent, j))] });
                }
            }
            decisions.push(choices);
        }
    }
    problem.base = base;
    problem.decisions = decisions;
    let mut store = EqualitySystem::new(problem.num_vars);
    for (t, r) in &problem.base {
        store.insert(t, r.clone());
    }
    let outcome = problem.explore((0..problem.decisions.len()).collect(), store, Vec::new(), 0);
    let branches = problem.branches.load(Ordering::Relaxed);
    let verdict = match outcome {
        Explore::Limit => SearchVerdict::Inconclusive { branches },
        Explore::Infeasible => SearchVerdict::Infeasible(InfeasibilityCertificate {
            branches,
            lp_calls: problem.lp_calls.load(Ordering::Relaxed),
            equality_conflicts: problem.conflicts.load(Ordering::Relaxed),
            farkas_refutations: problem.farkas.load(Ordering::Relaxed),
            zero_slack: problem.zero_slack.load(Ordering::Relaxed),
        }),
        Explore::Found(point) => {
            let nn = n * n;
            let fragment = profiles
                .iter()
                .enumerate()
                .map(|(p, profile)| {
                    let rows = point[p * nn..(p + 1) * nn].chunks(n).map(|r| r.to_vec()).collect();
                    Assignment::new(rows).map(|x| (profile.clone(), x))
                })
                .collect::<Result<Vec<_>>>()?;
            let problems = fragment_satisfies(&fragment, &axioms)?;
            if !problems.is_empty() {
                return Err(Error::Certification(format!("search witness fails its own axioms: {}", problems.join("; "))));
            }
            SearchVerdict::Witness(fragment)
        }
    };
    Ok(SearchReport {
        theorem,
        axioms,
        profiles: named,
        edges: edges.len(),
        variables: problem.num_vars,
        decisions: problem.decisions.len(),
        verdict,
    })
}

/// Violations of `axioms` among the given matrices. Relational axioms are
/// checked on every pair of profiles in the fragment they relate.
pub fn fragment_satisfies(fragment: &[(PreferenceProfile, Assignment)], axioms: &[Axiom]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let axioms = expand(axioms);
    let has = |a: Axiom| axioms.contains(&a);
    for (k, (p, x)) in fragment.iter().enumerate() {
        let n = p.n();
        if has(Axiom::OrdinalEfficiency) && !is_ordinally_efficient(x, p)?.is_efficient() {
            out.push(format!("profile #{k} is not ordinally efficient"));
        }
        if has(Axiom::Symmetry) {
            for i in 0..n {
                for i2 in i + 1..n {
                    if p.order(i) == p.order(i2) && x.row(i) != x.row(i2) {
                        out.push(format!("profile #{k}: agents {i} and {i2} share an order but not a row"));
                    }
                }
            }
        }
        for (k2, (q, y)) in fragment.iter().enumerate() {
            for perm in permutations(n) {
                if has(Axiom::Anonymity) && p.permute_agents(&perm) == *q && x.permute_agents(&perm) != *y {
                    out.push(format!("profiles #{k} and #{k2} violate anonymity"));
                }
                if has(Axiom::Neutrality) && p.permute_objects(&perm) == *q && x.permute_objects(&perm) != *y {
                    out.push(format!("profiles #{k} and #{k2} violate neutrality"));
                }
            }
            let Some((agent, pair)) = p.adjacent_transition_to(q) else { continue };
            let t = Transition { profile: p.clone(), agent, pair: Some(pair), misreport: q.clone() };
            let c = evaluate_transition(&t, x, y);
            let checks = [
                (Axiom::SwapMonotonicity, c.swap_monotonicity == Some(true)),
                (Axiom::UpperInvariance, c.upper_invariance == Some(true)),
                (Axiom::LowerInvariance, c.lower_invariance == Some(true)),
                (Axiom::NonBossiness, c.non_bossiness),
            ];
            for (a, ok) in checks {
                if has(a) && !ok {
                    out.push(format!("transition #{k} -> #{k2} violates {}", a.name()));
                }
            }
        }
    }
    let dedup: BTreeSet<String> = out.into_iter().collect();
    Ok(dedup.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_of_strategyproofness() {
        assert_eq!(
            expand(&[Axiom::LocalSp, Axiom::Symmetry]),
            vec![Axiom::SwapMonotonicity, Axiom::UpperInvariance, Axiom::LowerInvariance, Axiom::Symmetry]
        );
    }

    #[test]
    fn theorem_profiles_are_distinct_and_linked() {
        let one = distinct_profiles(1).unwrap();
        assert_eq!(one.len(), 11);
        let two = distinct_profiles(2).unwrap();
        assert_eq!(two.len(), 13);
        let ps: Vec<_> = one.iter().map(|(_, p)| p.clone()).collect();
        assert!(adjacent_edges(&ps).len() >= 13);
    }
}

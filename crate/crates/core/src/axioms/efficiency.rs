//! Ordinal and ex-post efficiency oracles.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::assignment::Assignment;
use crate::dominance::ordinal_dominance;
use crate::error::{Error, Result};
use crate::polytope::{birkhoff_system, entry_var, LinearSystem, LpOutcome, Sense};
use crate::profile::{permutations, PreferenceProfile};
use crate::rational::{one, rat, Rational};

/// One edge of the trading relation: `agent` prefers `from` to `to` and holds
/// `to` with positive probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TradingEdge {
    pub from: usize,
    pub to: usize,
    pub agent: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EfficiencyCertificate {
    /// The trading relation is acyclic; objects listed so that every edge
    /// points forward.
    Efficient { topological_order: Vec<usize> },
    /// A trading cycle and the assignment obtained by trading around it.
    Dominated { cycle: Vec<TradingEdge>, witness: Assignment },
}

impl EfficiencyCertificate {
    pub fn is_efficient(&self) -> bool {
        matches!(self, EfficiencyCertificate::Efficient { .. })
    }

    pub fn witness(&self) -> Option<&Assignment> {
        match self {
            EfficiencyCertificate::Dominated { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// `edges[j][k]`: the lowest-indexed agent supporting `j -> k`, if any. Only
/// the support of `rows` matters.
pub fn trading_relation(rows: &[Vec<Rational>], profile: &PreferenceProfile) -> Vec<Vec<Option<usize>>> {
    let n = rows.len();
    let mut edges = vec![vec![None; n]; n];
    for i in (0..n).rev() {
        let ranking = profile.order(i).ranking();
        for (pos, &held) in ranking.iter().enumerate() {
            if !rows[i][held].is_positive() {
                continue;
            }
            for &better in &ranking[..pos] {
                edges[better][held] = Some(i);
            }
        }
    }
    edges
}

fn find_cycle(edges: &[Vec<Option<usize>>]) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let n = edges.len();
    let mut indegree = vec![0; n];
    for row in edges {
        for (k, e) in row.iter().enumerate() {
            if e.is_some() {
                indegree[k] += 1;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut done = vec![false; n];
    while let Some(j) = (0..n).find(|&j| !done[j] && indegree[j] == 0) {
        done[j] = true;
        order.push(j);
        for (k, e) in edges[j].iter().enumerate() {
            if e.is_some() {
                indegree[k] -= 1;
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // every remaining object has a remaining predecessor; walk backwards until a repeat
    let start = (0..n).find(|&j| !done[j]).expect("unfinished object");
    let mut path = vec![start];
    let mut seen = vec![None; n];
    seen[start] = Some(0);
    let mut current = start;
    loop {
        let pred = (0..n).find(|&p| !done[p] && edges[p][current].is_some()).expect("predecessor");
        if let Some(at) = seen[pred] {
            let mut cycle: Vec<usize> = path[at..].to_vec();
            cycle.reverse();
            return Err(cycle);
        }
        seen[pred] = Some(path.len());
        path.push(pred);
        current = pred;
    }
}

/// Decides ordinal efficiency by acyclicity of the trading relation. A cycle
/// yields a strictly dominating witness, re-checked by `ordinal_dominance`.
pub fn is_ordinally_efficient(x: &Assignment, profile: &PreferenceProfile) -> Result<EfficiencyCertificate> {
    if x.n() != profile.n() {
        return Err(Error::Dimension(format!("{}x{} matrix for {} agents", x.n(), x.n(), profile.n())));
    }
    let edges = trading_relation(x.rows(), profile);
    let objects = match find_cycle(&edges) {
        Ok(order) => return Ok(EfficiencyCertificate::Efficient { topological_order: order }),
        Err(cycle) => cycle,
    };
    let k = objects.len();
    let cycle: Vec<TradingEdge> = (0..k)
        .map(|t| {
            let (from, to) = (objects[t], objects[(t + 1) % k]);
            TradingEdge { from, to, agent: edges[from][to].expect("cycle edge") }
        })
        .collect();
    let eps = cycle.iter().map(|e| x.entry(e.agent, e.to).clone()).min().expect("nonempty cycle") * rat(1, 2);
    let mut rows = x.rows().to_vec();
    for e in &cycle {
        rows[e.agent][e.to] -= &eps;
        rows[e.agent][e.from] += &eps;
    }
    let witness = Assignment::new(rows)?;
    if !ordinal_dominance(&witness, x, profile)?.strictly() {
        return Err(Error::Certification("trading-cycle witness does not strictly dominate".into()));
    }
    Ok(EfficiencyCertificate::Dominated { cycle, witness })
}

/// Searches for a strictly dominating assignment by maximising the total
/// prefix-sum slack over the weakly dominating assignments.
pub fn find_strict_dominator(x: &Assignment, profile: &PreferenceProfile) -> Result<Option<Assignment>> {
    let n = x.n();
    if n != profile.n() {
        return Err(Error::Dimension(format!("{n}x{n} matrix for {} agents", profile.n())));
    }
    let mut system: LinearSystem = birkhoff_system(n);
    let mut objective = vec![Rational::zero(); n * n];
    for i in 0..n {
        let ranking = profile.order(i).ranking();
        let mut prefix = Rational::zero();
        for len in 1..n {
            prefix += x.entry(i, ranking[len - 1]);
            let terms: Vec<(usize, Rational)> = ranking[..len].iter().map(|&j| (entry_var(n, i, j), one())).collect();
            for (v, _) in &terms {
                objective[*v] += Rational::one();
            }
            system.add_ge(terms, prefix.clone())?;
        }
    }
    let objective: Vec<(usize, Rational)> = objective.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    let baseline: Rational = objective.iter().map(|(v, c)| c * x.entry(v / n, v % n)).sum();
    system.set_objective(Sense::Maximize, objective)?;
    match system.solve() {
        LpOutcome::Optimal { value, point } if value > baseline => {
            let rows: Vec<Vec<Rational>> = point.chunks(n).map(|r| r.to_vec()).collect();
            let y = Assignment::new(rows)?;
            if !ordinal_dominance(&y, x, profile)?.strictly() {
                return Err(Error::Certification("LP dominator fails the dominance check".into()));
            }
            Ok(Some(y))
        }
        LpOutcome::Optimal { .. } => Ok(None),
        other => Err(Error::Certification(format!("dominator LP returned {other:?}"))),
    }
}

/// Largest `n` for which ex-post efficiency is decided by enumerating
/// deterministic assignments.
pub const EXPOST_MAX_AGENTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExPostVerdict {
    pub efficient: bool,
    /// Weights over Pareto-undominated permutations when efficient.
    pub decomposition: Vec<(Rational, Vec<usize>)>,
    pub undominated_count: usize,
}

fn pareto_dominates(a: &[usize], b: &[usize], profile: &PreferenceProfile) -> bool {
    let mut strict = false;
    for i in 0..a.len() {
        let (ra, rb) = (profile.order(i).rank_of(a[i]), profile.order(i).rank_of(b[i]));
        if ra > rb {
            return false;
        }
        strict |= ra < rb;
    }
    strict
}

/// Pareto-undominated deterministic assignments at `profile`.
pub fn pareto_undominated(profile: &PreferenceProfile) -> Result<Vec<Vec<usize>>> {
    let n = profile.n();
    if n > EXPOST_MAX_AGENTS {
        return Err(Error::Capacity(format!("ex-post efficiency enumerates n! assignments; n = {n} exceeds {EXPOST_MAX_AGENTS}")));
    }
    let perms = permutations(n);
    Ok(perms.iter().filter(|p| !perms.iter().any(|q| pareto_dominates(q, p, profile))).cloned().collect())
}

/// Whether `x` is a lottery over Pareto-undominated deterministic assignments.
pub fn is_expost_efficient(x: &Assignment, profile: &PreferenceProfile) -> Result<ExPostVerdict> {
    let n = x.n();
    let efficient = pareto_undominated(profile)?;
    let undominated_count = efficient.len();
    let usable: Vec<&Vec<usize>> =
        efficient.iter().filter(|p| p.iter().enumerate().all(|(i, &j)| x.entry(i, j).is_positive())).collect();
    let mut system = LinearSystem::new(usable.len());
    for i in 0..n {
        for j in 0..n {
            let terms: Vec<(usize, Rational)> =
                usable.iter().enumerate().filter(|(_, p)| p[i] == j).map(|(k, _)| (k, one())).collect();
            system.add_eq(terms, x.entry(i, j).clone())?;
        }
    }
    match system.solve() {
        LpOutcome::Optimal { point, .. } => {
            let decomposition = point
                .into_iter()
                .zip(usable)
                .filter(|(w, _)| w.is_positive())
                .map(|(w, p)| (w, p.clone()))
                .collect();
            Ok(ExPostVerdict { efficient: true, decomposition, undominated_count })
        }
        _ => Ok(ExPostVerdict { efficient: false, decomposition: Vec::new(), undominated_count }),
    }
}

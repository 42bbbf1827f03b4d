//! Preference orders and profiles, plus the combinatorial operations on them:
//! adjacent swaps, contour sets, object relabelings and agent exchanges.
//!
//! Agents and objects are opaque labels that are mapped to indices once, when a
//! [`Universe`] is built. Everything downstream works with indices.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The labelled sets of agents `N` and objects `M`, with `|N| = |M| = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    agents: Vec<String>,
    objects: Vec<String>,
}

/// Orders labels numerically when both parse as integers, otherwise lexically.
pub(crate) fn natural_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

impl Universe {
    /// Builds a universe keeping the given label order.
    pub fn new(agents: Vec<String>, objects: Vec<String>) -> Result<Self> {
        if agents.len() != objects.len() {
            return Err(Error::Dimension(format!(
                "{} agents but {} objects",
                agents.len(),
                objects.len()
            )));
        }
        if agents.is_empty() {
            return Err(Error::Input("empty universe".into()));
        }
        for (kind, labels) in [("agent", &agents), ("object", &objects)] {
            for (k, label) in labels.iter().enumerate() {
                if label.is_empty() || label.chars().any(|c| c.is_whitespace() || c == '>' || c == ':') {
                    return Err(Error::Input(format!("invalid {kind} label `{label}`")));
                }
                if labels[..k].contains(label) {
                    return Err(Error::Input(format!("duplicate {kind} `{label}`")));
                }
            }
        }
        Ok(Self { agents, objects })
    }

    /// Builds a universe with both label sets sorted into canonical order.
    pub fn canonical(mut agents: Vec<String>, mut objects: Vec<String>) -> Result<Self> {
        agents.sort_by(|a, b| natural_cmp(a, b));
        objects.sort_by(|a, b| natural_cmp(a, b));
        Self::new(agents, objects)
    }

    /// Agents `1..=n` and objects `a, b, c, ...`.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 || n > 26 {
            return Err(Error::Capacity(format!("standard labels support 1..=26 objects, got {n}")));
        }
        let agents = (1..=n).map(|i| i.to_string()).collect();
        let objects = (0..n).map(|j| ((b'a' + j as u8) as char).to_string()).collect();
        Self::new(agents, objects)
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn agent(&self, i: usize) -> &str {
        &self.agents[i]
    }

    pub fn object(&self, j: usize) -> &str {
        &self.objects[j]
    }

    pub fn agent_index(&self, name: &str) -> Result<usize> {
        self.agents
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAgent(name.to_string()))
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }
}

/// A strict ranking of the `n` objects, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreferenceOrder {
    ranking: Vec<usize>,
}

impl PreferenceOrder {
    /// Validates that `ranking` is a permutation of `0..ranking.len()`.
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        let n = ranking.len();
        let mut seen = vec![false; n];
        for &j in &ranking {
            if j >= n {
                return Err(Error::MalformedRanking(format!("object index {j} out of range for n = {n}")));
            }
            if seen[j] {
                return Err(Error::MalformedRanking(format!("object index {j} ranked twice")));
            }
            seen[j] = true;
        }
        Ok(Self { ranking })
    }

    /// The order `0 > 1 > ... > n-1`.
    pub fn identity(n: usize) -> Self {
        Self { ranking: (0..n).collect() }
    }

    /// Parses `a>b>c` against the universe's object labels.
    pub fn parse(text: &str, universe: &Universe) -> Result<Self> {
        let ranking = text
            .split('>')
            .map(|s| universe.object_index(s.trim()))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::UnknownObject(o) => Error::MalformedRanking(format!("unknown object `{o}` in `{text}`")),
                other => other,
            })?;
        if ranking.len() != universe.n() {
            return Err(Error::MalformedRanking(format!(
                "`{text}` ranks {} objects, expected {}",
                ranking.len(),
                universe.n()
            )));
        }
        Self::new(ranking).map_err(|_| Error::MalformedRanking(format!("`{text}` repeats an object")))
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn top(&self) -> usize {
        self.ranking[0]
    }

    /// Position of object `j` (0 = most preferred).
    pub fn rank_of(&self, j: usize) -> usize {
        self.ranking
            .iter()
            .position(|&o| o == j)
            .expect("object ranked by order")
    }

    pub fn try_rank_of(&self, j: usize) -> Result<usize> {
        self.ranking
            .iter()
            .position(|&o| o == j)
            .ok_or_else(|| Error::UnknownObject(format!("#{j}")))
    }

    /// True when `j` is strictly preferred to `k`.
    pub fn prefers(&self, j: usize, k: usize) -> bool {
        self.rank_of(j) < self.rank_of(k)
    }

    /// Transposes positions `k` and `k + 1`; returns the new order and the
    /// swapped pair `(upper, lower)` as ranked in `self`.
    pub fn swap_at(&self, k: usize) -> (PreferenceOrder, (usize, usize)) {
        let mut ranking = self.ranking.clone();
        ranking.swap(k, k + 1);
        (PreferenceOrder { ranking }, (self.ranking[k], self.ranking[k + 1]))
    }

    /// The `n - 1` neighbours of this order, in order of the swap position.
    pub fn adjacent_swaps(&self) -> Vec<(PreferenceOrder, (usize, usize))> {
        (0..self.len().saturating_sub(1)).map(|k| self.swap_at(k)).collect()
    }

    /// If `other` differs from `self` by one adjacent transposition, returns the
    /// pair `(j, j')` with `j` ranked directly above `j'` in `self`.
    pub fn adjacent_pair_to(&self, other: &PreferenceOrder) -> Option<(usize, usize)> {
        if self.len() != other.len() {
            return None;
        }
        let diff: Vec<usize> = (0..self.len()).filter(|&k| self.ranking[k] != other.ranking[k]).collect();
        match diff.as_slice() {
            [k, l] if *l == k + 1
                && self.ranking[*k] == other.ranking[*l]
                && self.ranking[*l] == other.ranking[*k] =>
            {
                Some((self.ranking[*k], self.ranking[*l]))
            }
            _ => None,
        }
    }

    /// Upper and lower contour sets of `j`, each listed in preference order.
    pub fn contour_sets(&self, j: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        let k = self.try_rank_of(j)?;
        Ok((self.ranking[..k].to_vec(), self.ranking[k + 1..].to_vec()))
    }

    /// The order with objects `j` and `k` exchanged in place.
    pub fn relabeled(&self, j: usize, k: usize) -> PreferenceOrder {
        let ranking = self
            .ranking
            .iter()
            .map(|&o| if o == j { k } else if o == k { j } else { o })
            .collect();
        PreferenceOrder { ranking }
    }

    /// Applies an object permutation `perm` (object `o` becomes `perm[o]`).
    pub fn permuted(&self, perm: &[usize]) -> PreferenceOrder {
        PreferenceOrder { ranking: self.ranking.iter().map(|&o| perm[o]).collect() }
    }

    /// All `n!` orders in lexicographic order of their rankings.
    pub fn all(n: usize) -> Vec<PreferenceOrder> {
        permutations(n).into_iter().map(|ranking| PreferenceOrder { ranking }).collect()
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> impl fmt::Display + 'a {
        DisplayOrder { order: self, universe }
    }
}

struct DisplayOrder<'a> {
    order: &'a PreferenceOrder,
    universe: &'a Universe,
}

impl fmt::Display for DisplayOrder<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &j) in self.order.ranking.iter().enumerate() {
            if k > 0 {
                f.write_str(">")?;
            }
            f.write_str(self.universe.object(j))?;
        }
        Ok(())
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
}

/// One preference order per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceProfile {
    universe: Arc<Universe>,
    orders: Vec<PreferenceOrder>,
}

impl PreferenceProfile {
    pub fn new(universe: Arc<Universe>, orders: Vec<PreferenceOrder>) -> Result<Self> {
        let n = universe.n();
        if orders.len() != n {
            return Err(Error::Dimension(format!("{} orders for {n} agents", orders.len())));
        }
        if let Some(bad) = orders.iter().find(|o| o.len() != n) {
            return Err(Error::MalformedRanking(format!("order of length {} for {n} objects", bad.len())));
        }
        Ok(Self { universe, orders })
    }

    /// Profile over the standard universe from object-index rankings.
    pub fn from_rankings(rankings: &[&[usize]]) -> Result<Self> {
        let universe = Arc::new(Universe::standard(rankings.len())?);
        let orders = rankings
            .iter()
            .map(|r| PreferenceOrder::new(r.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, orders)
    }

    /// Profile over the standard universe from `a>b>c` strings, one per agent.
    /// The compact form `abc` is accepted too.
    pub fn from_strs(orders: &[&str]) -> Result<Self> {
        let universe = Arc::new(Universe::standard(orders.len())?);
        let orders = orders
            .iter()
            .map(|o| {
                if o.contains('>') {
                    PreferenceOrder::parse(o, &universe)
                } else {
                    let spelled: Vec<String> = o.chars().map(String::from).collect();
                    PreferenceOrder::parse(&spelled.join(">"), &universe)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, orders)
    }

    pub fn n(&self) -> usize {
        self.orders.len()
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn orders(&self) -> &[PreferenceOrder] {
        &self.orders
    }

    pub fn order(&self, agent: usize) -> &PreferenceOrder {
        &self.orders[agent]
    }

    /// The profile in which `agent` reports `order` instead.
    pub fn with_order(&self, agent: usize, order: PreferenceOrder) -> Self {
        let mut orders = self.orders.clone();
        orders[agent] = order;
        Self { universe: self.universe.clone(), orders }
    }

    fn check_agent(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownAgent(format!("#{i}")))
        }
    }

    fn check_object(&self, j: usize) -> Result<()> {
        if j < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownObject(format!("#{j}")))
        }
    }

    /// Exchanges the orders of agents `i` and `i2`.
    pub fn swap_agents(&self, i: usize, i2: usize) -> Result<Self> {
        self.check_agent(i)?;
        self.check_agent(i2)?;
        if i == i2 {
            return Err(Error::Input("cannot swap an agent with itself".into()));
        }
        let mut orders = self.orders.clone();
        orders.swap(i, i2);
        Ok(Self { universe: self.universe.clone(), orders })
    }

    /// Exchanges objects `j` and `j2` in every agent's order.
    pub fn relabel_objects(&self, j: usize, j2: usize) -> Result<Self> {
        self.check_object(j)?;
        self.check_object(j2)?;
        if j == j2 {
            return Err(Error::Input("cannot relabel an object with itself".into()));
        }
        let orders = self.orders.iter().map(|o| o.relabeled(j, j2)).collect();
        Ok(Self { universe: self.universe.clone(), orders })
    }

    /// Applies an agent permutation: agent `i`'s order moves to `perm[i]`.
    pub fn permute_agents(&self, perm: &[usize]) -> Self {
        let mut orders = self.orders.clone();
        for (i, order) in self.orders.iter().enumerate() {
            orders[perm[i]] = order.clone();
        }
        Self { universe: self.universe.clone(), orders }
    }

    /// Applies an object permutation to every order.
    pub fn permute_objects(&self, perm: &[usize]) -> Self {
        let orders = self.orders.iter().map(|o| o.permuted(perm)).collect();
        Self { universe: self.universe.clone(), orders }
    }

    /// If `other` arises from `self` by one agent's adjacent swap, returns the
    /// agent and the pair `(j, j')` with `j` above `j'` in `self`.
    pub fn adjacent_transition_to(&self, other: &PreferenceProfile) -> Option<(usize, (usize, usize))> {
        if self.n() != other.n() {
            return None;
        }
        let changed: Vec<usize> = (0..self.n()).filter(|&i| self.orders[i] != other.orders[i]).collect();
        match changed.as_slice() {
            [i] => self.orders[*i].adjacent_pair_to(&other.orders[*i]).map(|pair| (*i, pair)),
            _ => None,
        }
    }

    /// Every profile over the standard universe of size `n`, `(n!)^n` in total.
    pub fn all(n: usize) -> Result<Vec<PreferenceProfile>> {
        let universe = Arc::new(Universe::standard(n)?);
        let orders = PreferenceOrder::all(n);
        let total = (orders.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if total > 5_000_000 {
            return Err(Error::Capacity(format!("{total} profiles for n = {n}")));
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut digits = vec![0usize; n];
        loop {
            out.push(Self {
                universe: universe.clone(),
                orders: digits.iter().map(|&d| orders[d].clone()).collect(),
            });
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < orders.len() {
                    break;
                }
                digits[k] = 0;
            }
        }
    }
}

impl fmt::Display for PreferenceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, order) in self.orders.iter().enumerate() {
            writeln!(f, "{}: {}", self.universe.agent(i), order.display(&self.universe))?;
        }
        Ok(())
    }
}

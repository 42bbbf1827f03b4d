//! Replays a proof script against one shared store of linear equalities over
//! the entries of every profile's matrix.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::certify::{certify_efficiency_zero, LocalEqualities};
use super::entry::{EntryValue, ExpectedEntry};
use super::script::{InferenceStep, Invariance, NullScope, ProofScript};
use crate::error::{Error, Result};
use crate::polytope::EqualitySystem;
use crate::profile::{PreferenceOrder, PreferenceProfile, Universe};
use crate::rational::{format, parse, Rational};

/// What the replay knows about one profile's matrix.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub node: String,
    pub profile: PreferenceProfile,
    pub entries: Vec<Vec<EntryValue>>,
    /// Equalities mentioning this profile's entries, with the step that added
    /// them (`None` for row and column sums).
    pub constraints: Vec<Provenance>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub step: Option<usize>,
    pub license: String,
    pub equality: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepStatus {
    Applied,
    PreconditionFailed,
    Contradiction,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub index: usize,
    pub kind: String,
    pub description: String,
    pub license: String,
    pub status: StepStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeReport {
    pub name: String,
    pub profile: Vec<String>,
    pub auxiliary: bool,
    pub matrix: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_expected: Option<bool>,
    pub mismatches: Vec<String>,
    #[serde(skip)]
    pub system: ConstraintSystem,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProofReport {
    pub script: String,
    pub steps_total: usize,
    pub steps: Vec<StepReport>,
    pub nodes: Vec<NodeReport>,
    pub contradiction: Option<String>,
    pub expected_contradiction: String,
    pub success: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ProofReport {
    pub fn node(&self, name: &str) -> Option<&NodeReport> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub fn mismatches(&self) -> Vec<&str> {
        self.nodes.iter().flat_map(|n| n.mismatches.iter().map(String::as_str)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    /// Human-readable report: step log, matrices of the named profiles and the
    /// contradiction.
    pub fn render_text(&self) -> String {
        let mut out = format!("script {}\n\nsteps:\n", self.script);
        for s in &self.steps {
            let status = match s.status {
                StepStatus::Applied => "ok",
                StepStatus::PreconditionFailed => "PRECONDITION FAILED",
                StepStatus::Contradiction => "contradiction",
            };
            out.push_str(&format!("{:>3}. {} [{}] {}: {}\n", s.index + 1, s.description, s.license, status, s.detail));
        }
        if self.steps.len() < self.steps_total {
            out.push_str(&format!("     ({} steps not reached)\n", self.steps_total - self.steps.len()));
        }
        for node in self.nodes.iter().filter(|n| !n.auxiliary) {
            out.push_str(&format!("\nprofile {}: {}\n", node.name, node.profile.join(", ")));
            let width = node.matrix.iter().flatten().map(String::len).max().unwrap_or(1);
            for row in &node.matrix {
                let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                out.push_str(&format!("  {}\n", cells.join("  ")));
            }
            if let Some(p) = &node.parameter {
                out.push_str(&format!("  {p}\n"));
            }
            for m in &node.mismatches {
                out.push_str(&format!("  MISMATCH {m}\n"));
            }
        }
        out.push('\n');
        match &self.contradiction {
            Some(c) => out.push_str(&format!("CONTRADICTION: {c}\n")),
            None => out.push_str("no contradiction derived\n"),
        }
        out.push_str(if self.success { "replay succeeded\n" } else { "replay FAILED\n" });
        out
    }
}

enum Halt {
    Precondition(String),
    Contradiction(String),
    Fatal(Error),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Fatal(e)
    }
}

type StepResult = std::result::Result<String, Halt>;

struct Param {
    var: usize,
    name: String,
}

struct Node {
    name: String,
    block: usize,
}

struct Engine<'a> {
    script: &'a ProofScript,
    universe: Arc<Universe>,
    n: usize,
    blocks: Vec<PreferenceProfile>,
    block_name: Vec<String>,
    params: HashMap<usize, Param>,
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    store: EqualitySystem,
    log: Vec<(Option<usize>, String, Vec<(usize, Rational)>, Rational)>,
    intervals: HashMap<(usize, usize, usize), (Rational, Rational)>,
    current: Option<usize>,
}

fn parse_profile(universe: &Arc<Universe>, orders: &[String]) -> Result<PreferenceProfile> {
    let orders = orders.iter().map(|o| PreferenceOrder::parse(o, universe)).collect::<Result<Vec<_>>>()?;
    PreferenceProfile::new(universe.clone(), orders)
}

impl<'a> Engine<'a> {
    fn new(script: &'a ProofScript) -> Result<Self> {
        let universe = Arc::new(Universe::new(script.agents.clone(), script.objects.clone())?);
        let n = universe.n();
        let mut blocks: Vec<PreferenceProfile> = Vec::new();
        let mut block_name = Vec::new();
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        for spec in &script.nodes {
            let profile = parse_profile(&universe, &spec.profile)?;
            let block = match blocks.iter().position(|b| *b == profile) {
                Some(b) => b,
                None => {
                    blocks.push(profile);
                    block_name.push(spec.name.clone());
                    blocks.len() - 1
                }
            };
            if index.insert(spec.name.clone(), nodes.len()).is_some() {
                return Err(Error::Input(format!("node `{}` defined twice", spec.name)));
            }
            nodes.push(Node { name: spec.name.clone(), block });
        }
        let mut engine = Self {
            script,
            universe,
            n,
            blocks,
            block_name,
            params: HashMap::new(),
            nodes,
            index,
            store: EqualitySystem::new(0),
            log: Vec::new(),
            intervals: HashMap::new(),
            current: None,
        };
        engine.check_references()?;
        engine.collect_parameters()?;
        let num_vars = engine.blocks.len() * n * n;
        let param_vars: Vec<usize> = {
            let mut v: Vec<usize> = engine.params.values().map(|p| p.var).collect();
            v.sort_unstable();
            v
        };
        let mut order: Vec<usize> = (0..num_vars).filter(|v| !param_vars.contains(v)).collect();
        order.extend(param_vars);
        engine.store = EqualitySystem::with_priority(order);
        for b in 0..engine.blocks.len() {
            for i in 0..n {
                let row: Vec<(usize, Rational)> = (0..n).map(|j| (b * n * n + i * n + j, Rational::one())).collect();
                engine.record(None, "feasibility", row, Rational::one());
                let col: Vec<(usize, Rational)> = (0..n).map(|j| (b * n * n + j * n + i, Rational::one())).collect();
                engine.record(None, "feasibility", col, Rational::one());
            }
        }
        Ok(engine)
    }

    fn check_references(&self) -> Result<()> {
        for step in &self.script.steps {
            for name in step.sources().into_iter().chain(std::iter::once(step.target())) {
                if !self.index.contains_key(name) {
                    return Err(Error::Input(format!("step `{}` names unknown node `{name}`", step.describe())));
                }
            }
        }
        Ok(())
    }

    fn collect_parameters(&mut self) -> Result<()> {
        let mut wanted: Vec<(String, (String, String), String)> = Vec::new();
        for spec in &self.script.nodes {
            if let Some(p) = &spec.parameter {
                wanted.push((spec.name.clone(), p.entry.clone(), p.name.clone()));
            }
        }
        for step in &self.script.steps {
            if let InferenceStep::BistochasticComplete { node, parameter: Some(entry) } = step {
                if !wanted.iter().any(|(n, _, _)| n == node) {
                    wanted.push((node.clone(), entry.clone(), "x".into()));
                }
            }
        }
        for (node, (agent, object), name) in wanted {
            let i = self.universe.agent_index(&agent)?;
            let j = self.universe.object_index(&object)?;
            let block = self.nodes[self.index[&node]].block;
            if let Some(existing) = self.params.get(&block) {
                if existing.var != self.var_of_block(block, i, j) {
                    return Err(Error::Input(format!("profile {node} has two free parameters")));
                }
                continue;
            }
            self.params.insert(block, Param { var: self.var_of_block(block, i, j), name });
        }
        Ok(())
    }

    fn var_of_block(&self, block: usize, i: usize, j: usize) -> usize {
        block * self.n * self.n + i * self.n + j
    }

    fn node(&self, name: &str) -> usize {
        self.index[name]
    }

    fn var(&self, node: usize, i: usize, j: usize) -> usize {
        self.var_of_block(self.nodes[node].block, i, j)
    }

    fn profile(&self, node: usize) -> &PreferenceProfile {
        &self.blocks[self.nodes[node].block]
    }

    fn agent(&self, label: &str) -> std::result::Result<usize, Halt> {
        Ok(self.universe.agent_index(label)?)
    }

    fn object(&self, label: &str) -> std::result::Result<usize, Halt> {
        Ok(self.universe.object_index(label)?)
    }

    fn cell(&self, i: usize, j: usize) -> String {
        format!("({},{})", self.universe.agent(i), self.universe.object(j))
    }

    fn record(&mut self, step: Option<usize>, license: &str, terms: Vec<(usize, Rational)>, rhs: Rational) -> bool {
        let outcome = self.store.insert(&terms, rhs.clone());
        self.log.push((step, license.to_string(), terms, rhs));
        outcome != crate::polytope::InsertOutcome::Inconsistent
    }

    fn insert(&mut self, license: &str, terms: Vec<(usize, Rational)>, rhs: Rational) -> std::result::Result<(), Halt> {
        if self.record(self.current, license, terms, rhs) {
            Ok(())
        } else {
            Err(Halt::Contradiction("the derived equalities are inconsistent".into()))
        }
    }

    fn equate(&mut self, license: &str, a: usize, b: usize) -> std::result::Result<(), Halt> {
        if a == b {
            return Ok(());
        }
        self.insert(license, vec![(a, Rational::one()), (b, -Rational::one())], Rational::zero())
    }

    fn fix(&mut self, license: &str, var: usize, value: Rational) -> std::result::Result<(), Halt> {
        self.insert(license, vec![(var, Rational::one())], value)
    }

    fn param_range(&self, block: usize) -> Option<(Rational, Rational)> {
        let p = self.params.get(&block)?;
        let (mut lo, mut hi) = (Rational::zero(), Rational::one());
        for v in block * self.n * self.n..(block + 1) * self.n * self.n {
            let e = self.store.expression(v);
            if let [(var, slope)] = e.terms.as_slice() {
                if *var == p.var {
                    let a = (-&e.constant) / slope;
                    let b = (Rational::one() - &e.constant) / slope;
                    let (a, b) = if a <= b { (a, b) } else { (b, a) };
                    lo = lo.max(a);
                    hi = hi.min(b);
                }
            }
        }
        Some((lo, hi))
    }

    fn entry(&self, node: usize, i: usize, j: usize) -> EntryValue {
        let block = self.nodes[node].block;
        let e = self.store.expression(self.var(node, i, j));
        if e.is_constant() {
            return EntryValue::Known(e.constant);
        }
        if let (Some(p), [(var, slope)]) = (self.params.get(&block), e.terms.as_slice()) {
            if *var == p.var {
                let range = self.param_range(block).expect("parameterised block");
                return EntryValue::Affine { constant: e.constant, slope: slope.clone(), parameter: p.name.clone(), range };
            }
        }
        match self.intervals.get(&(block, i, j)) {
            Some((lo, hi)) => EntryValue::Interval(lo.clone(), hi.clone()),
            None => EntryValue::Unknown,
        }
    }

    /// Store consistency, known entries in [0,1] and a nonempty parameter range.
    fn automatic_checks(&self) -> std::result::Result<(), Halt> {
        if self.store.is_inconsistent() {
            return Err(Halt::Contradiction("the derived equalities are inconsistent".into()));
        }
        for (k, node) in self.nodes.iter().enumerate() {
            if self.block_name[node.block] != node.name {
                continue;
            }
            for i in 0..self.n {
                for j in 0..self.n {
                    if let EntryValue::Known(v) = self.entry(k, i, j) {
                        if v.is_negative() || v > Rational::one() {
                            return Err(Halt::Contradiction(format!(
                                "entry {} at profile {}: derived {} outside [0,1]",
                                self.cell(i, j),
                                node.name,
                                format(&v)
                            )));
                        }
                    }
                }
            }
            if let Some((lo, hi)) = self.param_range(node.block) {
                if lo > hi {
                    return Err(Halt::Contradiction(format!(
                        "parameter {} at profile {}: no value keeps every entry in [0,1]",
                        self.params[&node.block].name, node.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Cells of each row then each column of the node's matrix.
    fn lines(&self) -> Vec<(String, Vec<(usize, usize)>)> {
        let n = self.n;
        let rows = (0..n).map(|i| (format!("row {}", self.universe.agent(i)), (0..n).map(|j| (i, j)).collect()));
        let cols = (0..n).map(|j| (format!("column {}", self.universe.object(j)), (0..n).map(|i| (i, j)).collect()));
        rows.chain(cols).collect()
    }

    /// A line whose known entries already exceed 1.
    fn sum_violation(&self, node: usize) -> Option<String> {
        for (label, cells) in self.lines() {
            let known: Vec<((usize, usize), Rational)> = cells
                .iter()
                .filter_map(|&(i, j)| self.entry(node, i, j).known().cloned().map(|v| ((i, j), v)))
                .collect();
            let total: Rational = known.iter().map(|(_, v)| v.clone()).sum();
            if total > Rational::one() {
                let terms: Vec<String> = known
                    .iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|((i, j), v)| format!("{}={}", self.cell(*i, *j), format(v)))
                    .collect();
                return Some(format!(
                    "{label} at profile {}: {} = {} > 1",
                    self.nodes[node].name,
                    terms.join(" + "),
                    format(&total)
                ));
            }
        }
        None
    }

    /// Checks that `to` arises from `from` by `agent` swapping the adjacent
    /// pair, the first object ranked above the second at `from`.
    fn transition(&self, from: usize, to: usize, agent: &str, pair: &(String, String)) -> std::result::Result<(usize, usize, usize), Halt> {
        let i = self.agent(agent)?;
        let (j, k) = (self.object(&pair.0)?, self.object(&pair.1)?);
        match self.profile(from).adjacent_transition_to(self.profile(to)) {
            Some((a, (x, y))) if a == i && x == j && y == k => Ok((i, j, k)),
            _ => Err(Halt::Precondition(format!(
                "profile {} does not arise from {} by agent {agent} swapping {} above {}",
                self.nodes[to].name, self.nodes[from].name, pair.0, pair.1
            ))),
        }
    }

    fn carry_row(&mut self, license: &str, from: usize, to: usize, i: usize, objects: &[usize]) -> std::result::Result<String, Halt> {
        for &j in objects {
            self.equate(license, self.var(from, i, j), self.var(to, i, j))?;
        }
        let cells: Vec<String> = objects.iter().map(|&j| self.cell(i, j)).collect();
        Ok(format!("{} carried from {} to {}", cells.join(","), self.nodes[from].name, self.nodes[to].name))
    }

    fn equalize_rows(&mut self, node: usize, agents: &[usize]) -> std::result::Result<(), Halt> {
        for w in agents.windows(2) {
            for j in 0..self.n {
                self.equate("symmetry", self.var(node, w[0], j), self.var(node, w[1], j))?;
            }
        }
        Ok(())
    }

    /// Equalities over the node's own entries implied by the whole store,
    /// in local indices.
    fn local_equalities(&self, node: usize) -> LocalEqualities {
        let nn = self.n * self.n;
        let base = self.nodes[node].block * nn;
        let total = self.store.num_vars();
        let mut order: Vec<usize> = (0..total).filter(|v| !(base..base + nn).contains(v)).collect();
        order.extend(base..base + nn);
        let mut projected = EqualitySystem::with_priority(order);
        for (terms, rhs) in self.store.rows() {
            projected.insert(&terms, rhs);
        }
        projected
            .rows()
            .filter(|(terms, _)| terms.iter().all(|(v, _)| (base..base + nn).contains(v)))
            .map(|(terms, rhs)| (terms.into_iter().map(|(v, c)| (v - base, c)).collect(), rhs))
            .collect()
    }

    fn complete(&mut self, node: usize) -> std::result::Result<Vec<String>, Halt> {
        let mut zeroed = Vec::new();
        loop {
            if let Some(v) = self.sum_violation(node) {
                return Err(Halt::Contradiction(v));
            }
            let mut forced = Vec::new();
            for (_, cells) in self.lines() {
                let mut total = Rational::zero();
                let mut open = Vec::new();
                for &(i, j) in &cells {
                    match self.entry(node, i, j) {
                        EntryValue::Known(v) => total += v,
                        _ => open.push((i, j)),
                    }
                }
                if total.is_one() {
                    forced.extend(open);
                }
            }
            forced.sort_unstable();
            forced.dedup();
            if forced.is_empty() {
                return Ok(zeroed);
            }
            for (i, j) in forced {
                self.fix("feasibility", self.var(node, i, j), Rational::zero())?;
                zeroed.push(self.cell(i, j));
            }
        }
    }

    fn apply(&mut self, step: &InferenceStep) -> StepResult {
        match step {
            InferenceStep::UniformBySymmetry { node } => {
                let k = self.node(node);
                let mut groups: Vec<Vec<usize>> = Vec::new();
                for i in 0..self.n {
                    match groups.iter_mut().find(|g| self.profile(k).order(g[0]) == self.profile(k).order(i)) {
                        Some(g) => g.push(i),
                        None => groups.push(vec![i]),
                    }
                }
                for g in &groups {
                    self.equalize_rows(k, g)?;
                }
                let labels: Vec<String> = groups
                    .iter()
                    .filter(|g| g.len() > 1)
                    .map(|g| g.iter().map(|&i| self.universe.agent(i).to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                Ok(format!("rows of agents with equal orders equalised: {{{}}}", labels.join("}, {")))
            }
            InferenceStep::SymmetryEqualize { node, agents } => {
                let k = self.node(node);
                let ids = agents.iter().map(|a| self.agent(a)).collect::<std::result::Result<Vec<_>, _>>()?;
                if let Some(&bad) = ids.iter().find(|&&i| self.profile(k).order(i) != self.profile(k).order(ids[0])) {
                    return Err(Halt::Precondition(format!(
                        "agents {} and {} report different orders at {node}",
                        self.universe.agent(ids[0]),
                        self.universe.agent(bad)
                    )));
                }
                self.equalize_rows(k, &ids)?;
                Ok(format!("rows {} equal", agents.join(",")))
            }
            InferenceStep::UpperInvarianceLink { from, to, agent, pair }
            | InferenceStep::LowerInvarianceLink { from, to, agent, pair } => {
                let (f, t) = (self.node(from), self.node(to));
                let (i, j, k) = self.transition(f, t, agent, pair)?;
                let upper = matches!(step, InferenceStep::UpperInvarianceLink { .. });
                let order = self.profile(f).order(i).clone();
                let objects = if upper { order.contour_sets(j)?.0 } else { order.contour_sets(k)?.1 };
                self.carry_row(step.license(), f, t, i, &objects)
            }
            InferenceStep::EfficiencyZero { node, entries } => {
                let k = self.node(node);
                let mut notes = Vec::new();
                for (a, o) in entries {
                    let (i, j) = (self.agent(a)?, self.object(o)?);
                    let local = self.local_equalities(k);
                    let cert = match certify_efficiency_zero(self.profile(k), &local, (i, j)) {
                        Ok(c) => c,
                        Err(Error::Certification(msg)) => {
                            return Err(Halt::Precondition(format!("{} at {node} not certified: {msg}", self.cell(i, j))))
                        }
                        Err(e) => return Err(Halt::Fatal(e)),
                    };
                    self.fix("ordinal efficiency", self.var(k, i, j), Rational::zero())?;
                    notes.push(format!("{}=0 ({cert})", self.cell(i, j)));
                }
                Ok(notes.join("; "))
            }
            InferenceStep::BistochasticComplete { node, parameter } => {
                let k = self.node(node);
                let zeroed = self.complete(k)?;
                let mut detail =
                    if zeroed.is_empty() { "no entries forced to zero".to_string() } else { format!("zeroed {}", zeroed.join(",")) };
                if let Some((a, o)) = parameter {
                    let (i, j) = (self.agent(a)?, self.object(o)?);
                    let open: Vec<String> = (0..self.n)
                        .flat_map(|i| (0..self.n).map(move |j| (i, j)))
                        .filter(|&(i, j)| matches!(self.entry(k, i, j), EntryValue::Unknown | EntryValue::Interval(..)))
                        .map(|(i, j)| self.cell(i, j))
                        .collect();
                    if !open.is_empty() {
                        return Err(Halt::Precondition(format!(
                            "entries {} at {node} are not affine in {}",
                            open.join(","),
                            self.cell(i, j)
                        )));
                    }
                    if let Some((lo, hi)) = self.param_range(self.nodes[k].block) {
                        let name = &self.params[&self.nodes[k].block].name;
                        detail.push_str(&format!("; free entry {}={name} in [{},{}]", self.cell(i, j), format(&lo), format(&hi)));
                    }
                }
                Ok(detail)
            }
            InferenceStep::SwapNullPropagation { from, to, agent, pair, scope } => {
                let (f, t) = (self.node(from), self.node(to));
                let (i, j, _) = self.transition(f, t, agent, pair)?;
                if self.entry(f, i, j).known().is_none_or(|v| !v.is_zero()) {
                    return Err(Halt::Precondition(format!(
                        "{} at {from} is {}, not known to be 0",
                        self.cell(i, j),
                        self.entry(f, i, j)
                    )));
                }
                match scope {
                    NullScope::Row => {
                        self.carry_row(step.license(), f, t, i, &(0..self.n).collect::<Vec<_>>())?;
                        Ok(format!("row {agent} unchanged"))
                    }
                    NullScope::Matrix => {
                        for a in 0..self.n {
                            for o in 0..self.n {
                                self.equate(step.license(), self.var(f, a, o), self.var(t, a, o))?;
                            }
                        }
                        Ok(format!("row {agent} unchanged, so the whole matrix is unchanged"))
                    }
                }
            }
            InferenceStep::AnonymityRelabel { from, to, agents } => {
                let (f, t) = (self.node(from), self.node(to));
                let mut sigma: Vec<usize> = (0..self.n).collect();
                for (a, b) in agents {
                    let (a, b) = (self.agent(a)?, self.agent(b)?);
                    if sigma[a] != a || sigma[b] != b {
                        return Err(Halt::Precondition("agent pairs must be disjoint".into()));
                    }
                    sigma.swap(a, b);
                }
                if (0..self.n).any(|i| self.profile(t).order(sigma[i]) != self.profile(f).order(i)) {
                    return Err(Halt::Precondition(format!("{to} is not {from} with the listed agents exchanged")));
                }
                for i in 0..self.n {
                    for j in 0..self.n {
                        self.equate("anonymity", self.var(f, i, j), self.var(t, sigma[i], j))?;
                    }
                }
                Ok("rows follow their orders".into())
            }
            InferenceStep::NeutralityRelabel { from, to, objects } => {
                let (f, t) = (self.node(from), self.node(to));
                let mut tau: Vec<usize> = (0..self.n).collect();
                for (a, b) in objects {
                    let (a, b) = (self.object(a)?, self.object(b)?);
                    if tau[a] != a || tau[b] != b {
                        return Err(Halt::Precondition("object pairs must be disjoint".into()));
                    }
                    tau.swap(a, b);
                }
                if (0..self.n).any(|i| *self.profile(t).order(i) != self.profile(f).order(i).permuted(&tau)) {
                    return Err(Halt::Precondition(format!("{to} is not {from} with the listed objects renamed")));
                }
                for i in 0..self.n {
                    for j in 0..self.n {
                        self.equate("neutrality", self.var(f, i, j), self.var(t, i, tau[j]))?;
                    }
                }
                Ok("columns follow their objects".into())
            }
            InferenceStep::IntervalTransfer { from, to, agent, pair, entry, via } => {
                let (f, t) = (self.node(from), self.node(to));
                let (i, j, k) = self.transition(f, t, agent, pair)?;
                let (ei, ej) = (self.agent(&entry.0)?, self.object(&entry.1)?);
                let order = self.profile(f).order(i).clone();
                let contour = match via {
                    Invariance::Upper => order.contour_sets(j)?.0,
                    Invariance::Lower => order.contour_sets(k)?.1,
                };
                if ei != i || !contour.contains(&ej) {
                    return Err(Halt::Precondition(format!(
                        "{} is not in agent {agent}'s {} contour set of the swap",
                        self.cell(ei, ej),
                        if *via == Invariance::Upper { "upper" } else { "lower" }
                    )));
                }
                let Some((lo, hi)) = self.entry(f, ei, ej).interval() else {
                    return Err(Halt::Precondition(format!("{} at {from} has no bound", self.cell(ei, ej))));
                };
                let bound = format!("[{},{}]", format(&lo), format(&hi));
                match self.entry(t, ei, ej) {
                    EntryValue::Known(v) if v < lo || v > hi => Err(Halt::Contradiction(format!(
                        "entry {} at profile {to}: derived {}, transferred bound {bound}",
                        self.cell(ei, ej),
                        format(&v)
                    ))),
                    _ => {
                        self.intervals.insert((self.nodes[t].block, ei, ej), (lo, hi));
                        Ok(format!("{} at {to} bounded by {bound}", self.cell(ei, ej)))
                    }
                }
            }
            InferenceStep::ContradictionCheck { node } => match self.sum_violation(self.node(node)) {
                Some(v) => Err(Halt::Contradiction(v)),
                None => Ok("every row and column can still sum to 1".into()),
            },
        }
    }

    fn system(&self, node: usize) -> ConstraintSystem {
        let entries = (0..self.n).map(|i| (0..self.n).map(|j| self.entry(node, i, j)).collect()).collect();
        let nn = self.n * self.n;
        let block = self.nodes[node].block;
        let constraints = self
            .log
            .iter()
            .filter(|(_, _, terms, _)| terms.iter().any(|(v, _)| v / nn == block))
            .map(|(step, license, terms, rhs)| Provenance {
                step: *step,
                license: license.clone(),
                equality: self.render_equality(terms, rhs),
            })
            .collect();
        ConstraintSystem { node: self.nodes[node].name.clone(), profile: self.profile(node).clone(), entries, constraints }
    }

    fn render_equality(&self, terms: &[(usize, Rational)], rhs: &Rational) -> String {
        let nn = self.n * self.n;
        let mut out = String::new();
        for (k, (v, c)) in terms.iter().enumerate() {
            let (b, i, j) = (v / nn, (v % nn) / self.n, v % self.n);
            let name = format!("{}@{}", self.cell(i, j), self.block_name[b]);
            let sign = if c.is_negative() { " - " } else if k > 0 { " + " } else { "" };
            let mag = c.abs();
            if mag.is_one() {
                out.push_str(&format!("{sign}{name}"));
            } else {
                out.push_str(&format!("{sign}{}*{name}", format(&mag)));
            }
        }
        format!("{out} = {}", format(rhs))
    }

    fn node_report(&self, k: usize) -> Result<NodeReport> {
        let spec = &self.script.nodes[k];
        let system = self.system(k);
        let matrix: Vec<Vec<String>> = system.entries.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect();
        let block = self.nodes[k].block;
        let parameter = self.params.get(&block).and_then(|p| {
            self.param_range(block).map(|(lo, hi)| format!("{} in [{},{}]", p.name, format(&lo), format(&hi)))
        });
        let mut mismatches = Vec::new();
        let param_name = spec.parameter.as_ref().map(|p| p.name.as_str()).or(self.params.get(&block).map(|p| p.name.as_str()));
        if let Some(expected) = &spec.expected {
            if expected.len() != self.n || expected.iter().any(|r| r.len() != self.n) {
                return Err(Error::Input(format!("expected matrix of {} is not {}x{}", spec.name, self.n, self.n)));
            }
            for i in 0..self.n {
                for j in 0..self.n {
                    let want = ExpectedEntry::parse(&expected[i][j], param_name)?;
                    if !want.matches(&system.entries[i][j]) {
                        mismatches.push(format!(
                            "profile {} entry {}: expected {}, derived {}",
                            spec.name,
                            self.cell(i, j),
                            expected[i][j],
                            system.entries[i][j]
                        ));
                    }
                }
            }
        }
        if let Some(p) = &spec.parameter {
            let want = (parse(&p.lo)?, parse(&p.hi)?);
            match self.param_range(block) {
                Some(got) if got == want => {}
                got => mismatches.push(format!(
                    "profile {} parameter {}: expected [{},{}], derived {}",
                    spec.name,
                    p.name,
                    p.lo,
                    p.hi,
                    got.map(|(a, b)| format!("[{},{}]", format(&a), format(&b))).unwrap_or_else(|| "none".into())
                )),
            }
        }
        Ok(NodeReport {
            name: spec.name.clone(),
            profile: system.profile.orders().iter().map(|o| o.display(&self.universe).to_string()).collect(),
            auxiliary: spec.auxiliary,
            matrix,
            parameter,
            matches_expected: spec.expected.as_ref().map(|_| mismatches.is_empty()),
            mismatches,
            system,
        })
    }
}

/// Runs every step in order. Replay stops at the first contradiction or failed
/// precondition; matrices are compared with the expected ones at that point.
pub fn replay(script: &ProofScript) -> Result<ProofReport> {
    let start = Instant::now();
    let mut engine = Engine::new(script)?;
    let mut steps = Vec::new();
    let mut contradiction = None;
    let mut precondition_failed = false;
    for (index, step) in script.steps.iter().enumerate() {
        engine.current = Some(index);
        let result = engine.apply(step).and_then(|detail| engine.automatic_checks().map(|_| detail));
        let (status, detail) = match result {
            Ok(detail) => (StepStatus::Applied, detail),
            Err(Halt::Precondition(msg)) => (StepStatus::PreconditionFailed, msg),
            Err(Halt::Contradiction(msg)) => (StepStatus::Contradiction, msg),
            Err(Halt::Fatal(e)) => return Err(e),
        };
        steps.push(StepReport {
            index,
            kind: step.kind().to_string(),
            description: step.describe(),
            license: step.license().to_string(),
            status,
            detail: detail.clone(),
        });
        match status {
            StepStatus::Applied => {}
            StepStatus::PreconditionFailed => {
                precondition_failed = true;
                break;
            }
            StepStatus::Contradiction => {
                contradiction = Some(detail);
                break;
            }
        }
    }
    let nodes = (0..script.nodes.len()).map(|k| engine.node_report(k)).collect::<Result<Vec<_>>>()?;
    let matched = nodes.iter().all(|n| n.mismatches.is_empty());
    let fired = contradiction.as_ref().is_some_and(|c| c.contains(&script.expected_contradiction));
    Ok(ProofReport {
        script: script.name.clone(),
        steps_total: script.steps.len(),
        steps,
        nodes,
        contradiction,
        expected_contradiction: script.expected_contradiction.clone(),
        success: matched && fired && !precondition_failed,
        elapsed: start.elapsed(),
    })
}

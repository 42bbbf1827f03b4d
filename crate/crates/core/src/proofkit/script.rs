//! Proof scripts: named profiles, expected matrices and ordered inference steps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A matrix entry named by agent and object labels.
pub type EntryRef = (String, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterSpec {
    pub name: String,
    pub entry: EntryRef,
    pub lo: String,
    pub hi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub name: String,
    /// One order per agent, written `a>b>c>d`.
    pub profile: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub auxiliary: bool,
    /// Rows of rationals, `?` for entries the proof leaves open, or affine
    /// expressions in the parameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<ParameterSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NullScope {
    /// Swap monotonicity only: the agent's row is unchanged.
    Row,
    /// Swap monotonicity and non-bossiness: the whole matrix is unchanged.
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Invariance {
    Upper,
    Lower,
}

/// One inference. Swapped pairs are `(j, j')` with `j` ranked above `j'` in the
/// agent's order at `from`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum InferenceStep {
    UniformBySymmetry { node: String },
    UpperInvarianceLink { from: String, to: String, agent: String, pair: (String, String) },
    LowerInvarianceLink { from: String, to: String, agent: String, pair: (String, String) },
    EfficiencyZero { node: String, entries: Vec<EntryRef> },
    SymmetryEqualize { node: String, agents: Vec<String> },
    BistochasticComplete {
        node: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        parameter: Option<EntryRef>,
    },
    SwapNullPropagation { from: String, to: String, agent: String, pair: (String, String), scope: NullScope },
    /// Agents listed in pairs exchange orders between `from` and `to`.
    AnonymityRelabel { from: String, to: String, agents: Vec<(String, String)> },
    /// Objects listed in pairs exchange names between `from` and `to`.
    NeutralityRelabel { from: String, to: String, objects: Vec<(String, String)> },
    IntervalTransfer { from: String, to: String, agent: String, pair: (String, String), entry: EntryRef, via: Invariance },
    ContradictionCheck { node: String },
}

impl InferenceStep {
    pub fn kind(&self) -> &'static str {
        match self {
            InferenceStep::UniformBySymmetry { .. } => "UniformBySymmetry",
            InferenceStep::UpperInvarianceLink { .. } => "UpperInvarianceLink",
            InferenceStep::LowerInvarianceLink { .. } => "LowerInvarianceLink",
            InferenceStep::EfficiencyZero { .. } => "EfficiencyZero",
            InferenceStep::SymmetryEqualize { .. } => "SymmetryEqualize",
            InferenceStep::BistochasticComplete { .. } => "BistochasticComplete",
            InferenceStep::SwapNullPropagation { .. } => "SwapNullPropagation",
            InferenceStep::AnonymityRelabel { .. } => "AnonymityRelabel",
            InferenceStep::NeutralityRelabel { .. } => "NeutralityRelabel",
            InferenceStep::IntervalTransfer { .. } => "IntervalTransfer",
            InferenceStep::ContradictionCheck { .. } => "ContradictionCheck",
        }
    }

    /// The axiom that licenses the step.
    pub fn license(&self) -> &'static str {
        match self {
            InferenceStep::UniformBySymmetry { .. } | InferenceStep::SymmetryEqualize { .. } => "symmetry",
            InferenceStep::UpperInvarianceLink { .. } => "upper invariance",
            InferenceStep::LowerInvarianceLink { .. } => "lower invariance",
            InferenceStep::EfficiencyZero { .. } => "ordinal efficiency",
            InferenceStep::BistochasticComplete { .. } | InferenceStep::ContradictionCheck { .. } => "feasibility",
            InferenceStep::SwapNullPropagation { scope: NullScope::Row, .. } => "swap monotonicity",
            InferenceStep::SwapNullPropagation { scope: NullScope::Matrix, .. } => "swap monotonicity and non-bossiness",
            InferenceStep::AnonymityRelabel { .. } => "anonymity",
            InferenceStep::NeutralityRelabel { .. } => "neutrality",
            InferenceStep::IntervalTransfer { via: Invariance::Upper, .. } => "upper invariance",
            InferenceStep::IntervalTransfer { via: Invariance::Lower, .. } => "lower invariance",
        }
    }

    /// Nodes read by the step.
    pub fn sources(&self) -> Vec<&str> {
        match self {
            InferenceStep::UpperInvarianceLink { from, .. }
            | InferenceStep::LowerInvarianceLink { from, .. }
            | InferenceStep::SwapNullPropagation { from, .. }
            | InferenceStep::AnonymityRelabel { from, .. }
            | InferenceStep::NeutralityRelabel { from, .. }
            | InferenceStep::IntervalTransfer { from, .. } => vec![from],
            _ => Vec::new(),
        }
    }

    /// The node the step derives information about.
    pub fn target(&self) -> &str {
        match self {
            InferenceStep::UniformBySymmetry { node }
            | InferenceStep::EfficiencyZero { node, .. }
            | InferenceStep::SymmetryEqualize { node, .. }
            | InferenceStep::BistochasticComplete { node, .. }
            | InferenceStep::ContradictionCheck { node } => node,
            InferenceStep::UpperInvarianceLink { to, .. }
            | InferenceStep::LowerInvarianceLink { to, .. }
            | InferenceStep::SwapNullPropagation { to, .. }
            | InferenceStep::AnonymityRelabel { to, .. }
            | InferenceStep::NeutralityRelabel { to, .. }
            | InferenceStep::IntervalTransfer { to, .. } => to,
        }
    }

    /// Steps whose purpose is to expose the final contradiction.
    pub fn is_terminal(&self) -> bool {
        matches!(self, InferenceStep::IntervalTransfer { .. } | InferenceStep::ContradictionCheck { .. })
    }

    pub fn describe(&self) -> String {
        let arrow = |from: &str, to: &str| format!("{from} -> {to}");
        match self {
            InferenceStep::UniformBySymmetry { node } => format!("{node}: uniform by symmetry"),
            InferenceStep::UpperInvarianceLink { from, to, agent, pair }
            | InferenceStep::LowerInvarianceLink { from, to, agent, pair } => {
                format!("{}: agent {agent} swaps {},{}", arrow(from, to), pair.0, pair.1)
            }
            InferenceStep::EfficiencyZero { node, entries } => {
                let e: Vec<String> = entries.iter().map(|(i, j)| format!("({i},{j})")).collect();
                format!("{node}: {} = 0 by ordinal efficiency", e.join(", "))
            }
            InferenceStep::SymmetryEqualize { node, agents } => format!("{node}: rows of agents {} equal", agents.join(",")),
            InferenceStep::BistochasticComplete { node, parameter } => match parameter {
                Some((i, j)) => format!("{node}: complete by feasibility, free entry ({i},{j})"),
                None => format!("{node}: complete by feasibility"),
            },
            InferenceStep::SwapNullPropagation { from, to, agent, pair, .. } => format!(
                "{}: agent {agent} swaps {},{} holding no {}",
                arrow(from, to),
                pair.0,
                pair.1,
                pair.0
            ),
            InferenceStep::AnonymityRelabel { from, to, agents } => {
                let p: Vec<String> = agents.iter().map(|(a, b)| format!("{a}<->{b}")).collect();
                format!("{}: agents exchange orders {}", arrow(from, to), p.join(" "))
            }
            InferenceStep::NeutralityRelabel { from, to, objects } => {
                let p: Vec<String> = objects.iter().map(|(a, b)| format!("{a}<->{b}")).collect();
                format!("{}: objects renamed {}", arrow(from, to), p.join(" "))
            }
            InferenceStep::IntervalTransfer { from, to, agent, pair, entry, .. } => format!(
                "{}: agent {agent} swaps {},{}; entry ({},{}) transferred",
                arrow(from, to),
                pair.0,
                pair.1,
                entry.0,
                entry.1
            ),
            InferenceStep::ContradictionCheck { node } => format!("{node}: feasibility check"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofScript {
    pub name: String,
    pub agents: Vec<String>,
    pub objects: Vec<String>,
    /// Axioms the argument assumes.
    pub axioms: Vec<String>,
    pub nodes: Vec<NodeSpec>,
    pub steps: Vec<InferenceStep>,
    /// Text the final contradiction must contain.
    pub expected_contradiction: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ProofScript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scripts serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("proof script: {e}")))
    }

    pub fn node(&self, name: &str) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub fn node_mut(&mut self, name: &str) -> Option<&mut NodeSpec> {
        self.nodes.iter_mut().find(|n| n.name == name)
    }
}

fn spell(compact: &str) -> String {
    compact.chars().map(String::from).collect::<Vec<_>>().join(">")
}

fn labels(n: usize) -> (Vec<String>, Vec<String>) {
    ((1..=n).map(|i| i.to_string()).collect(), (0..n).map(|j| ((b'a' + j as u8) as char).to_string()).collect())
}

struct Builder {
    script: ProofScript,
}

fn s(x: &str) -> String {
    x.to_string()
}

fn pair(a: &str, b: &str) -> (String, String) {
    (s(a), s(b))
}

fn entries(list: &[(&str, &str)]) -> Vec<EntryRef> {
    list.iter().map(|(i, j)| pair(i, j)).collect()
}

impl Builder {
    fn new(name: &str, axioms: &[&str], contradiction: &str) -> Self {
        let (agents, objects) = labels(4);
        Self {
            script: ProofScript {
                name: s(name),
                agents,
                objects,
                axioms: axioms.iter().map(|a| s(a)).collect(),
                nodes: Vec::new(),
                steps: Vec::new(),
                expected_contradiction: s(contradiction),
                notes: Vec::new(),
            },
        }
    }

    fn node(&mut self, name: &str, profile: [&str; 4], expected: Option<[[&str; 4]; 4]>) -> &mut NodeSpec {
        self.script.nodes.push(NodeSpec {
            name: s(name),
            profile: profile.iter().map(|o| spell(o)).collect(),
            auxiliary: false,
            expected: expected.map(|rows| rows.iter().map(|r| r.iter().map(|e| s(e)).collect()).collect()),
            parameter: None,
            note: None,
        });
        self.script.nodes.last_mut().expect("just pushed")
    }

    fn aux(&mut self, name: &str, profile: [&str; 4], note: &str) {
        let node = self.node(name, profile, None);
        node.auxiliary = true;
        node.note = Some(s(note));
    }

    fn step(&mut self, step: InferenceStep) {
        self.script.steps.push(step);
    }

    fn uniform(&mut self, node: &str) {
        self.step(InferenceStep::UniformBySymmetry { node: s(node) });
    }

    fn ui(&mut self, from: &str, to: &str, agent: &str, p: (&str, &str)) {
        self.step(InferenceStep::UpperInvarianceLink { from: s(from), to: s(to), agent: s(agent), pair: pair(p.0, p.1) });
    }

    fn li(&mut self, from: &str, to: &str, agent: &str, p: (&str, &str)) {
        self.step(InferenceStep::LowerInvarianceLink { from: s(from), to: s(to), agent: s(agent), pair: pair(p.0, p.1) });
    }

    fn ez(&mut self, node: &str, list: &[(&str, &str)]) {
        self.step(InferenceStep::EfficiencyZero { node: s(node), entries: entries(list) });
    }

    fn sym(&mut self, node: &str, agents: &[&str]) {
        self.step(InferenceStep::SymmetryEqualize { node: s(node), agents: agents.iter().map(|a| s(a)).collect() });
    }

    fn complete(&mut self, node: &str) {
        self.step(InferenceStep::BistochasticComplete { node: s(node), parameter: None });
    }

    fn null(&mut self, from: &str, to: &str, agent: &str, p: (&str, &str), scope: NullScope) {
        self.step(InferenceStep::SwapNullPropagation { from: s(from), to: s(to), agent: s(agent), pair: pair(p.0, p.1), scope });
    }
}

fn theorem_one() -> ProofScript {
    let mut b = Builder::new(
        "theorem-1",
        &["upper-invariance", "lower-invariance", "ordinal-efficiency", "symmetry"],
        "entry (3,c) at profile V: derived 1/6, transferred bound [0,1/12]",
    );
    let q = "1/4";
    b.node("I", ["abcd", "abcd", "abcd", "abcd"], Some([[q, q, q, q], [q, q, q, q], [q, q, q, q], [q, q, q, q]]));
    b.node(
        "II",
        ["abcd", "abcd", "abcd", "abdc"],
        Some([[q, q, "1/3", "1/6"], [q, q, "1/3", "1/6"], [q, q, "1/3", "1/6"], [q, q, "0", "1/2"]]),
    );
    b.node(
        "III",
        ["abcd", "abcd", "abcd", "adbc"],
        Some([[q, "1/3", "1/3", "1/12"], [q, "1/3", "1/3", "1/12"], [q, "1/3", "1/3", "1/12"], [q, "0", "0", "3/4"]]),
    );
    b.node(
        "IV",
        ["abcd", "abcd", "abdc", "abdc"],
        Some([[q, q, "1/2", "0"], [q, q, "1/2", "0"], [q, q, "0", "1/2"], [q, q, "0", "1/2"]]),
    );
    b.node(
        "V",
        ["abcd", "abcd", "abdc", "adbc"],
        Some([[q, "1/3", "5/12", "0"], [q, "1/3", "5/12", "0"], [q, "1/3", "1/6", q], [q, "0", "0", "3/4"]]),
    );
    b.node(
        "VI",
        ["abcd", "abcd", "bacd", "abcd"],
        Some([["1/3", "1/6", q, q], ["1/3", "1/6", q, q], ["0", "1/2", q, q], ["1/3", "1/6", q, q]]),
    );
    b.node(
        "VII",
        ["abcd", "abcd", "bacd", "adbc"],
        Some([
            ["1/3", "5/24", "1/3", "1/8"],
            ["1/3", "5/24", "1/3", "1/8"],
            ["0", "7/12", "1/3", "1/12"],
            ["1/3", "0", "0", "2/3"],
        ]),
    );
    let viii = b.node(
        "VIII",
        ["abcd", "abcd", "badc", "adbc"],
        Some([
            ["1/3", "5/24", "11/24", "0"],
            ["1/3", "5/24", "11/24", "0"],
            ["0", "7/12", "x", "5/12-x"],
            ["1/3", "0", "1/12-x", "7/12+x"],
        ]),
    );
    viii.parameter = Some(ParameterSpec { name: s("x"), entry: pair("3", "c"), lo: s("0"), hi: s("1/12") });
    b.aux("VI/VII", ["abcd", "abcd", "bacd", "abdc"], "agent 4 of VII swaps d with b: the intermediate profile on the way to VI");
    b.aux("VI/VIII.1", ["abcd", "abcd", "badc", "abcd"], "agent 3 of VI swaps c and d");
    b.aux("VI/VIII.2", ["abcd", "abcd", "badc", "abdc"], "then agent 4 swaps c and d; agent 4 swapping b and d next gives VIII");

    b.uniform("I");

    b.ui("I", "II", "4", ("c", "d"));
    b.sym("II", &["1", "2", "3"]);
    b.ez("II", &[("4", "c")]);
    b.complete("II");

    b.ui("II", "III", "4", ("b", "d"));
    b.li("II", "III", "4", ("b", "d"));
    b.ez("III", &[("4", "b")]);
    b.sym("III", &["1", "2", "3"]);
    b.complete("III");

    b.ui("II", "IV", "3", ("c", "d"));
    b.sym("IV", &["3", "4"]);
    b.sym("IV", &["1", "2"]);
    b.ez("IV", &[("3", "c"), ("4", "c")]);
    b.complete("IV");

    b.ui("III", "V", "3", ("c", "d"));
    b.ui("IV", "V", "4", ("b", "d"));
    b.li("IV", "V", "4", ("b", "d"));
    b.ez("V", &[("4", "b")]);
    b.sym("V", &["1", "2"]);
    b.ez("V", &[("1", "d"), ("2", "d")]);
    b.complete("V");

    b.li("I", "VI", "3", ("a", "b"));
    b.ez("VI", &[("3", "a")]);
    b.sym("VI", &["1", "2", "4"]);
    b.complete("VI");

    b.li("III", "VII", "3", ("a", "b"));
    b.ez("VII", &[("3", "a")]);
    b.ez("VII", &[("4", "b"), ("4", "c")]);
    b.ui("VI", "VI/VII", "4", ("c", "d"));
    b.ui("VI/VII", "VII", "4", ("b", "d"));
    b.sym("VII", &["1", "2"]);
    b.complete("VII");

    b.ui("VII", "VIII", "3", ("c", "d"));
    b.ui("VI", "VI/VIII.1", "3", ("c", "d"));
    b.sym("VI/VIII.1", &["1", "2", "4"]);
    b.ui("VI/VIII.1", "VI/VIII.2", "4", ("c", "d"));
    b.ui("VI/VIII.2", "VIII", "4", ("b", "d"));
    b.ez("VIII", &[("4", "b")]);
    b.sym("VIII", &["1", "2"]);
    b.ez("VIII", &[("1", "d"), ("2", "d")]);
    b.step(InferenceStep::BistochasticComplete { node: s("VIII"), parameter: Some(pair("3", "c")) });

    b.step(InferenceStep::IntervalTransfer {
        from: s("VIII"),
        to: s("V"),
        agent: s("3"),
        pair: pair("b", "a"),
        entry: pair("3", "c"),
        via: Invariance::Lower,
    });
    b.script.notes = vec![
        s("The two swaps of agent 4 from VII back to VI pass through the auxiliary profile VI/VII."),
        s("The final transfer swaps agent 3's top two objects, so the entry for c lies in the lower contour set and the link is licensed by lower invariance."),
    ];
    b.script
}

fn theorem_two() -> ProofScript {
    let mut b = Builder::new(
        "theorem-2",
        &[
            "swap-monotonicity",
            "lower-invariance",
            "ordinal-efficiency",
            "anonymity",
            "neutrality",
            "non-bossiness",
        ],
        "row 4 at profile VII: (4,c)=1/4 + (4,d)=1 = 5/4 > 1",
    );
    let h = "1/2";
    let one_rows = [[h, "0", h, "0"], [h, "0", h, "0"], ["0", h, "0", h], ["0", h, "0", h]];
    b.node("I", ["abcd", "abcd", "badc", "badc"], Some(one_rows));
    b.node("I'", ["badc", "badc", "abcd", "abcd"], Some([["0", h, "0", h], ["0", h, "0", h], [h, "0", h, "0"], [h, "0", h, "0"]]));
    b.node("I''", ["abcd", "abcd", "badc", "badc"], Some(one_rows)).note = Some(s("the renamed profile coincides with I"));
    b.aux("I/II.1", ["abcd", "abcd", "bdac", "badc"], "agent 3 moves a below d");
    b.aux("I/II.2", ["abcd", "abcd", "bdca", "badc"], "agent 3 moves a below c");
    b.aux("I/II.3", ["abcd", "abcd", "bdca", "bdac"], "agent 4 moves a below d");
    b.node("II", ["abcd", "abcd", "bdca", "bdca"], Some(one_rows));
    let q = "1/4";
    let three_rows = [[h, q, q, "0"], [h, q, q, "0"], ["0", q, q, h], ["0", q, q, h]];
    b.node("III", ["abcd", "abcd", "dbca", "dbca"], Some(three_rows));
    b.node("III'", ["dbca", "dbca", "abcd", "abcd"], Some([["0", q, q, h], ["0", q, q, h], [h, q, q, "0"], [h, q, q, "0"]]));
    b.node("III''", ["abcd", "abcd", "dbca", "dbca"], Some(three_rows)).note = Some(s("the renamed profile coincides with III"));
    let four_rows = [["1/2", "1/8", "3/8", "0"], ["1/2", "1/8", "3/8", "0"], ["0", "3/4", q, "0"], ["0", "0", "0", "1"]];
    b.node("IV", ["abcd", "abcd", "bdca", "dbca"], Some(four_rows));
    b.aux("IV/V.1", ["abcd", "abcd", "bcda", "dbca"], "agent 3 moves d below c");
    b.node("V", ["abcd", "abcd", "bcad", "dbca"], Some(four_rows));
    b.node("VI", ["abcd", "abcd", "bacd", "dbca"], Some(four_rows));
    b.node("VII", ["abcd", "abcd", "abcd", "dbca"], Some([["?", "?", q, "0"], ["?", "?", q, "0"], ["?", "?", q, "0"], ["?", "?", q, "1"]]));

    b.sym("I", &["1", "2"]);
    b.sym("I", &["3", "4"]);
    b.step(InferenceStep::AnonymityRelabel { from: s("I"), to: s("I'"), agents: vec![pair("1", "3"), pair("2", "4")] });
    b.step(InferenceStep::NeutralityRelabel { from: s("I'"), to: s("I''"), objects: vec![pair("a", "b"), pair("c", "d")] });
    b.ez("I", &[("3", "c")]);
    b.ez("I", &[("3", "a")]);
    b.complete("I");

    b.null("I", "I/II.1", "3", ("a", "d"), NullScope::Matrix);
    b.null("I/II.1", "I/II.2", "3", ("a", "c"), NullScope::Matrix);
    b.null("I/II.2", "I/II.3", "4", ("a", "d"), NullScope::Matrix);
    b.null("I/II.3", "II", "4", ("a", "c"), NullScope::Matrix);

    b.sym("III", &["1", "2"]);
    b.sym("III", &["3", "4"]);
    b.step(InferenceStep::AnonymityRelabel { from: s("III"), to: s("III'"), agents: vec![pair("1", "3"), pair("2", "4")] });
    b.step(InferenceStep::NeutralityRelabel { from: s("III'"), to: s("III''"), objects: vec![pair("a", "d")] });
    b.ez("III", &[("3", "a")]);
    b.complete("III");

    b.li("III", "IV", "3", ("d", "b"));
    b.li("II", "IV", "4", ("b", "d"));
    b.sym("IV", &["1", "2"]);
    b.ez("IV", &[("1", "d"), ("2", "d")]);
    b.ez("IV", &[("4", "b")]);
    b.complete("IV");

    b.null("IV", "IV/V.1", "3", ("d", "c"), NullScope::Matrix);
    b.null("IV/V.1", "V", "3", ("d", "a"), NullScope::Matrix);

    b.li("V", "VI", "3", ("c", "a"));
    b.sym("VI", &["1", "2"]);
    b.ez("VI", &[("1", "d"), ("2", "d")]);
    b.complete("VI");
    b.ez("VI", &[("3", "a")]);
    b.null("VI", "V", "3", ("a", "c"), NullScope::Row);
    b.complete("VI");

    b.li("VI", "VII", "3", ("b", "a"));
    b.sym("VII", &["1", "2", "3"]);
    b.step(InferenceStep::ContradictionCheck { node: s("VII") });
    b.script.notes = vec![
        s("I'' and III'' name the same profiles as I and III; the replay identifies nodes with equal profiles."),
        s("Moving an object the agent never receives down one position at a time leaves the assignment unchanged; auxiliary profiles record each swap."),
    ];
    b.script
}

/// The scripted proofs of the two impossibility theorems.
pub fn builtin_script(theorem: u8) -> Result<ProofScript> {
    match theorem {
        1 => Ok(theorem_one()),
        2 => Ok(theorem_two()),
        other => Err(Error::Input(format!("no built-in script for theorem {other}; expected 1 or 2"))),
    }
}

/// Adds `extra` agents, each ranking its own new object first. Old agents rank
/// the new objects last. Each node first certifies that new agents receive
/// their top object with certainty.
pub fn pad_script(script: &ProofScript, extra: usize) -> Result<ProofScript> {
    if extra == 0 {
        return Err(Error::Input("padding needs at least one extra agent".into()));
    }
    let n = script.agents.len();
    let m = n + extra;
    let (agents, objects) = labels(m);
    if script.agents != agents[..n] || script.objects != objects[..n] {
        return Err(Error::Input("padding expects agents 1..n and objects a.. in order".into()));
    }
    let new_objects: Vec<String> = objects[n..].to_vec();
    let mut out = script.clone();
    out.name = format!("{}+pad{extra}", script.name);
    out.agents = agents.clone();
    out.objects = objects.clone();
    let mut pad_steps = Vec::new();
    for node in &mut out.nodes {
        let old = node.profile.clone();
        for order in &mut node.profile {
            for o in &new_objects {
                order.push('>');
                order.push_str(o);
            }
        }
        for t in 0..extra {
            let own = &new_objects[t];
            let mut order = vec![own.clone()];
            order.extend(objects[..n].iter().cloned());
            order.extend(new_objects.iter().filter(|o| *o != own).cloned());
            node.profile.push(order.join(">"));
        }
        debug_assert_eq!(old.len(), n);
        if let Some(rows) = &mut node.expected {
            for row in rows.iter_mut() {
                row.extend(std::iter::repeat_n(s("0"), extra));
            }
            for t in 0..extra {
                let mut row = vec![s("0"); m];
                row[n + t] = s("1");
                rows.push(row);
            }
        }
        for t in 0..extra {
            let agent = agents[n + t].clone();
            let zeros: Vec<EntryRef> =
                objects.iter().filter(|o| **o != new_objects[t]).map(|o| (agent.clone(), o.clone())).collect();
            pad_steps.push(InferenceStep::EfficiencyZero { node: node.name.clone(), entries: zeros });
        }
        pad_steps.push(InferenceStep::BistochasticComplete { node: node.name.clone(), parameter: None });
    }
    let mut steps = Vec::new();
    for step in std::mem::take(&mut out.steps) {
        match step {
            InferenceStep::NeutralityRelabel { from, to, objects } => {
                steps.extend(relabel_with_padding(&mut out, from, to, objects, n)?);
            }
            other => steps.push(other),
        }
    }
    pad_steps.extend(steps);
    out.steps = pad_steps;
    out.notes.push(format!("padded with {extra} agent(s) who each rank a new object first"));
    Ok(out)
}

/// Renaming objects also permutes the new agents' rankings below their own
/// objects. When swap monotonicity and non-bossiness are assumed, the new
/// agents then restore their rankings by swaps of objects they never receive,
/// through auxiliary profiles.
fn relabel_with_padding(
    script: &mut ProofScript,
    from: String,
    to: String,
    objects: Vec<(String, String)>,
    n: usize,
) -> Result<Vec<InferenceStep>> {
    let rename = |o: &str| -> String {
        objects
            .iter()
            .find_map(|(a, b)| if a == o { Some(b.clone()) } else if b == o { Some(a.clone()) } else { None })
            .unwrap_or_else(|| o.to_string())
    };
    let split = |order: &str| -> Vec<String> { order.split('>').map(str::to_string).collect() };
    let source = script.node(&from).ok_or_else(|| Error::Input(format!("unknown node `{from}`")))?.profile.clone();
    let target = script.node(&to).ok_or_else(|| Error::Input(format!("unknown node `{to}`")))?.profile.clone();
    let mut current: Vec<Vec<String>> = source.iter().map(|o| split(o).iter().map(|x| rename(x)).collect()).collect();
    let goal: Vec<Vec<String>> = target.iter().map(|o| split(o)).collect();
    if current == goal {
        return Ok(vec![InferenceStep::NeutralityRelabel { from, to, objects }]);
    }
    let assumed = |a: &str| script.axioms.iter().any(|x| x == a);
    if !assumed("swap-monotonicity") || !assumed("non-bossiness") || current[..n] != goal[..n] {
        return Err(Error::Input(format!("padding cannot carry the renaming from {from} to {to}")));
    }
    let mut steps = Vec::new();
    let mut previous = format!("{to}/pad.0");
    let mut count = 0;
    let push_node = |script: &mut ProofScript, name: &str, orders: &[Vec<String>]| {
        script.nodes.push(NodeSpec {
            name: name.to_string(),
            profile: orders.iter().map(|o| o.join(">")).collect(),
            auxiliary: true,
            expected: None,
            parameter: None,
            note: Some(format!("new agents restore their rankings on the way to {to}")),
        });
    };
    push_node(script, &previous, &current);
    steps.push(InferenceStep::NeutralityRelabel { from, to: previous.clone(), objects });
    for agent in n..current.len() {
        loop {
            let order = &current[agent];
            let rank = |o: &String| goal[agent].iter().position(|g| g == o).expect("same objects");
            let Some(k) = (0..order.len() - 1).find(|&k| rank(&order[k]) > rank(&order[k + 1])) else { break };
            let pair = (order[k].clone(), order[k + 1].clone());
            current[agent].swap(k, k + 1);
            count += 1;
            let next = if current == goal { to.clone() } else { format!("{to}/pad.{count}") };
            if next != to {
                push_node(script, &next, &current);
            }
            steps.push(InferenceStep::SwapNullPropagation {
                from: previous.clone(),
                to: next.clone(),
                agent: script.agents[agent].clone(),
                pair,
                scope: NullScope::Matrix,
            });
            previous = next;
        }
    }
    Ok(steps)
}

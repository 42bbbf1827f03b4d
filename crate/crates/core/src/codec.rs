//! Text and JSON forms of profiles, assignments and table files.
//!
//! Profile text: one line per agent, `<agent>: <obj>><obj>>...`.
//! Matrix text: a header line of object names, then one line per agent of
//! whitespace-separated rationals, optionally prefixed by `<agent>:`.
//! Blank lines and lines starting with `#` are ignored inside blocks.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::assignment::{validate_bistochastic, Assignment};
use crate::error::{Error, Result};
use crate::profile::{PreferenceOrder, PreferenceProfile, Universe};
use crate::rational::{self, Rational};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses the profile text format. Agents and objects are put in canonical order.
pub fn parse_profile(text: &str) -> Result<PreferenceProfile> {
    let mut entries: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (line, content) in content_lines(text) {
        let (agent, order) = content.split_once(':').ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `<agent>: <ranking>`, got `{content}`"),
        })?;
        let agent = agent.trim().to_string();
        let objects: Vec<String> = order.split('>').map(|o| o.trim().to_string()).collect();
        if objects.iter().any(|o| o.is_empty()) {
            return Err(Error::MalformedRanking(format!("empty object name in `{}`", order.trim())));
        }
        entries.push((line, agent, objects));
    }
    let Some((_, _, first)) = entries.first() else {
        return Err(Error::Parse { line: 0, message: "empty profile".into() });
    };
    let mut objects = first.clone();
    objects.sort();
    objects.dedup();
    if objects.len() != first.len() {
        return Err(Error::MalformedRanking(format!("`{}` repeats an object", first.join(">"))));
    }
    let agents: Vec<String> = entries.iter().map(|(_, a, _)| a.clone()).collect();
    let universe = Arc::new(Universe::canonical(agents, objects)?);
    let mut orders = vec![None; universe.n()];
    for (line, agent, ranking) in &entries {
        let i = universe.agent_index(agent)?;
        let order = PreferenceOrder::parse(&ranking.join(">"), &universe).map_err(|e| match e {
            Error::MalformedRanking(m) => Error::MalformedRanking(format!("line {line}: {m}")),
            other => other,
        })?;
        orders[i] = Some(order);
    }
    PreferenceProfile::new(universe, orders.into_iter().map(Option::unwrap).collect())
}

pub fn format_profile(profile: &PreferenceProfile) -> String {
    profile.to_string()
}

/// A parsed matrix block with its labels, before alignment to a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixBlock {
    pub agents: Vec<String>,
    pub objects: Vec<String>,
    pub rows: Vec<Vec<Rational>>,
}

impl MatrixBlock {
    /// Reorders rows and columns to match `universe`'s label order.
    pub fn align(&self, universe: &Universe) -> Result<Assignment> {
        if self.objects.len() != universe.n() || self.agents.len() != universe.n() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for {} agents",
                self.agents.len(),
                self.objects.len(),
                universe.n()
            )));
        }
        let mut rows = vec![vec![Rational::default(); universe.n()]; universe.n()];
        for (r, agent) in self.agents.iter().enumerate() {
            let i = universe.agent_index(agent)?;
            for (c, object) in self.objects.iter().enumerate() {
                rows[i][universe.object_index(object)?] = self.rows[r][c].clone();
            }
        }
        Assignment::new(rows)
    }

    /// The matrix over its own labels in canonical order.
    pub fn into_assignment(self) -> Result<(Arc<Universe>, Assignment)> {
        let universe = Arc::new(Universe::canonical(self.agents.clone(), self.objects.clone())?);
        let m = self.align(&universe)?;
        Ok((universe, m))
    }
}

/// Parses the matrix text format. Unlabelled rows get agents `1..n`.
pub fn parse_matrix(text: &str) -> Result<MatrixBlock> {
    let mut lines = content_lines(text);
    let (_, header) = lines.next().ok_or_else(|| Error::Parse { line: 0, message: "empty matrix".into() })?;
    let objects: Vec<String> = header.split_whitespace().map(str::to_string).collect();
    let mut agents = Vec::new();
    let mut rows = Vec::new();
    for (line, content) in lines {
        let (label, cells) = match content.split_once(':') {
            Some((a, rest)) => (Some(a.trim().to_string()), rest),
            None => (None, content),
        };
        let row = cells.split_whitespace().map(rational::parse).collect::<Result<Vec<_>>>()?;
        if row.len() != objects.len() {
            return Err(Error::Parse {
                line,
                message: format!("{} entries for {} objects", row.len(), objects.len()),
            });
        }
        agents.push(label.unwrap_or_else(|| (rows.len() + 1).to_string()));
        rows.push(row);
    }
    validate_bistochastic(&rows)?;
    Ok(MatrixBlock { agents, objects, rows })
}

pub fn format_matrix(universe: &Universe, m: &Assignment) -> String {
    let mut out = universe.objects().join(" ");
    out.push('\n');
    for (i, row) in m.rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(rational::format).collect();
        out.push_str(&format!("{}: {}\n", universe.agent(i), cells.join(" ")));
    }
    out
}

/// JSON mirror of a profile and/or matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub agents: Vec<String>,
    pub objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
}

impl Document {
    pub fn new(universe: &Universe, profile: Option<&PreferenceProfile>, matrix: Option<&Assignment>) -> Self {
        Self {
            agents: universe.agents().to_vec(),
            objects: universe.objects().to_vec(),
            orders: profile.map(|p| {
                (0..p.n())
                    .map(|i| {
                        let names = p.order(i).ranking().iter().map(|&j| universe.object(j).to_string()).collect();
                        (universe.agent(i).to_string(), names)
                    })
                    .collect()
            }),
            matrix: matrix.map(|m| m.rows().iter().map(|r| r.iter().map(rational::format).collect()).collect()),
        }
    }

    /// Decodes into a universe (canonical order), optional profile and optional matrix.
    pub fn decode(&self) -> Result<(Arc<Universe>, Option<PreferenceProfile>, Option<Assignment>)> {
        let universe = Arc::new(Universe::canonical(self.agents.clone(), self.objects.clone())?);
        let profile = match &self.orders {
            None => None,
            Some(orders) => {
                let mut slots = vec![None; universe.n()];
                for (agent, ranking) in orders {
                    let i = universe.agent_index(agent)?;
                    slots[i] = Some(PreferenceOrder::parse(&ranking.join(">"), &universe)?);
                }
                let orders = slots
                    .into_iter()
                    .enumerate()
                    .map(|(i, o)| o.ok_or_else(|| Error::Input(format!("no order for agent {}", universe.agent(i)))))
                    .collect::<Result<Vec<_>>>()?;
                Some(PreferenceProfile::new(universe.clone(), orders)?)
            }
        };
        let matrix = match &self.matrix {
            None => None,
            Some(rows) => {
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                validate_bistochastic(&rows)?;
                let block = MatrixBlock { agents: self.agents.clone(), objects: self.objects.clone(), rows };
                Some(block.align(&universe)?)
            }
        };
        Ok((universe, profile, matrix))
    }
}

pub fn to_json(universe: &Universe, profile: Option<&PreferenceProfile>, matrix: Option<&Assignment>) -> String {
    serde_json::to_string_pretty(&Document::new(universe, profile, matrix)).expect("document serializes")
}

pub fn from_json(text: &str) -> Result<(Arc<Universe>, Option<PreferenceProfile>, Option<Assignment>)> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    doc.decode()
}

/// Splits text into blocks separated by blank lines.
fn blocks(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.trim().is_empty() {
                out.push(std::mem::take(&mut current));
            }
            current.clear();
        } else {
            current.push_str(line);
            current.push('\n');
        }
    }
    if !current.trim().is_empty() {
        out.push(current);
    }
    out
}

/// Parses one or more blank-line separated profile blocks.
pub fn parse_profiles(text: &str) -> Result<Vec<PreferenceProfile>> {
    let out = blocks(text)
        .iter()
        .filter(|b| b.lines().any(|l| !l.trim().is_empty() && !l.trim().starts_with('#')))
        .map(|b| parse_profile(b))
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(Error::Parse { line: 0, message: "no profile".into() });
    }
    Ok(out)
}

/// Parses a table file: alternating profile and matrix blocks.
pub fn parse_table(text: &str) -> Result<Vec<(PreferenceProfile, Assignment)>> {
    let blocks = blocks(text);
    if blocks.len() % 2 != 0 {
        return Err(Error::Parse { line: 0, message: "table file needs profile/matrix block pairs".into() });
    }
    let mut out = Vec::new();
    for pair in blocks.chunks(2) {
        let profile = parse_profile(&pair[0])?;
        let matrix = parse_matrix(&pair[1])?.align(profile.universe())?;
        out.push((profile, matrix));
    }
    Ok(out)
}

pub fn format_table(entries: &[(PreferenceProfile, Assignment)]) -> String {
    let parts: Vec<String> = entries
        .iter()
        .map(|(p, m)| format!("{}\n{}", format_profile(p), format_matrix(p.universe(), m)))
        .collect();
    parts.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn profile_line_round_trips() {
        let p = parse_profile("1: a>b>c>d\n2: a>b>c>d\n3: b>a>d>c\n4: b>a>d>c\n").unwrap();
        assert_eq!(format_profile(&p), "1: a>b>c>d\n2: a>b>c>d\n3: b>a>d>c\n4: b>a>d>c\n");
        assert_eq!(parse_profile(&format_profile(&p)).unwrap(), p);
    }

    #[test]
    fn profile_agents_are_canonicalised() {
        let p = parse_profile("2: b>a\n1: a>b\n").unwrap();
        assert_eq!(p.universe().agents(), ["1", "2"]);
        assert_eq!(p.order(0).ranking(), [0, 1]);
    }

    #[test]
    fn malformed_profiles() {
        assert!(matches!(parse_profile("1: a>a\n2: a>b\n"), Err(Error::MalformedRanking(_))));
        assert!(matches!(parse_profile("1: a>b\n2: a\n"), Err(Error::MalformedRanking(_))));
        assert!(matches!(parse_profile("1 a>b\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_profile("1: a>b\n"), Err(Error::Dimension(_))));
    }

    #[test]
    fn matrix_row_parses_exactly() {
        let block = parse_matrix(
            "a b c d\n1/4 1/4 1/3 1/6\n1/4 1/4 1/3 1/6\n1/4 1/4 1/3 1/6\n1/4 1/4 0 1/2\n",
        )
        .unwrap();
        assert_eq!(block.rows[0], vec![rat(1, 4), rat(1, 4), rat(1, 3), rat(1, 6)]);
        assert_eq!(block.rows[0].iter().sum::<Rational>(), rat(1, 1));
        assert_eq!(block.agents, ["1", "2", "3", "4"]);
    }

    #[test]
    fn matrix_errors_are_distinct() {
        assert!(matches!(parse_matrix("a b\n1/2 3/4\n1/2 1/4\n"), Err(Error::NotBistochastic(_))));
        assert!(matches!(parse_matrix("a b\n0.5 0.5\n0.5 0.5\n"), Err(Error::MalformedRational(_))));
        assert!(matches!(parse_matrix("a b\n1 0\n0\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn matrix_text_round_trips_through_alignment() {
        let p = parse_profile("1: a>b\n2: b>a\n").unwrap();
        let m = Assignment::from_strs(&[&["1", "0"], &["0", "1"]]).unwrap();
        let text = format_matrix(p.universe(), &m);
        assert_eq!(text, "a b\n1: 1 0\n2: 0 1\n");
        assert_eq!(parse_matrix(&text).unwrap().align(p.universe()).unwrap(), m);
        let swapped = parse_matrix("b a\n2: 1 0\n1: 0 1\n").unwrap().align(p.universe()).unwrap();
        assert_eq!(swapped, m);
    }

    #[test]
    fn json_round_trip() {
        let p = parse_profile("1: a>b>c\n2: c>b>a\n3: b>a>c\n").unwrap();
        let m = Assignment::uniform(3);
        let text = to_json(p.universe(), Some(&p), Some(&m));
        let (u, p2, m2) = from_json(&text).unwrap();
        assert_eq!(&*u, &**p.universe());
        assert_eq!(p2.unwrap(), p);
        assert_eq!(m2.unwrap(), m);
        assert!(text.contains("\"1/3\""));
    }

    #[test]
    fn table_round_trip() {
        let p = parse_profile("1: a>b\n2: b>a\n").unwrap();
        let entries = vec![(p.clone(), Assignment::permutation(&[0, 1]).unwrap())];
        let text = format_table(&entries);
        assert_eq!(parse_table(&text).unwrap(), entries);
    }
}

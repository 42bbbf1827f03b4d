//! The `axiomlab` command line.
//!
//! Exit status: 0 when every check passes or a verdict is as expected, 1 when
//! violations or mismatches are reported, 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::assignment::Assignment;
use crate::axioms::{check_axioms, find_strict_dominator, is_ordinally_efficient, Axiom, CheckOptions, Domain, EfficiencyCertificate};
use crate::codec::{self, Document};
use crate::error::{Error, Result};
use crate::mechanisms::{Mechanism, Ps, Rsd, TableMechanism};
use crate::polytope::bvn_decompose;
use crate::profile::PreferenceProfile;
use crate::proofkit::{
    builtin_script, fragment_satisfies, independent_search, pad_script, replay, ProofScript, SearchOptions, SearchVerdict,
    DEFAULT_BRANCH_LIMIT,
};
use crate::rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "axiomlab", version, about = "Exact random assignment mechanisms, axiom audits and proof replay")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Emit structured JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel sweeps (falls back to AXIOMLAB_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a mechanism at every profile of a file.
    Eval {
        #[arg(long)]
        mechanism: String,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Audit a mechanism against axioms on a domain.
    Check {
        #[arg(long)]
        mechanism: String,
        /// Axiom names, repeatable or comma separated.
        #[arg(long = "axiom", required = true, value_delimiter = ',')]
        axioms: Vec<String>,
        #[command(flatten)]
        domain: DomainArgs,
        /// Quantify strategyproofness and non-bossiness over all misreports.
        #[arg(long)]
        global: bool,
        #[arg(long, default_value_t = 5)]
        max_counterexamples: usize,
    },
    /// Decide ordinal efficiency of a matrix, or of a mechanism's output.
    Efficient {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, conflicts_with = "mechanism", required_unless_present = "mechanism")]
        matrix: Option<PathBuf>,
        #[arg(long)]
        mechanism: Option<String>,
    },
    /// Birkhoff-von Neumann decomposition of a matrix.
    Bvn {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Replay a proof script.
    Replay {
        #[arg(long, conflicts_with = "script", required_unless_present = "script")]
        theorem: Option<u8>,
        /// A script in JSON form.
        #[arg(long)]
        script: Option<PathBuf>,
        /// Add this many agents and objects outside the core.
        #[arg(long, default_value_t = 0)]
        pad: usize,
        /// Print the script as JSON instead of replaying it.
        #[arg(long)]
        dump_script: bool,
    },
    /// Search for mechanisms on a theorem's profiles satisfying its axioms.
    Search {
        #[arg(long)]
        theorem: u8,
        #[arg(long, value_delimiter = ',')]
        drop: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        add: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_BRANCH_LIMIT)]
        branch_limit: u64,
    },
}

#[derive(Debug, Args)]
#[group(skip)]
#[command(group(ArgGroup::new("domain_kind").required(true).multiple(false)))]
pub struct DomainArgs {
    /// Every profile with n agents and objects.
    #[arg(long, group = "domain_kind")]
    exhaustive: Option<usize>,
    /// Blank-line separated profile blocks.
    #[arg(long, group = "domain_kind")]
    profiles: Option<PathBuf>,
    /// Number of seeded random profiles or transitions.
    #[arg(long, group = "domain_kind", requires = "n")]
    sample: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl DomainArgs {
    fn domain(&self) -> Result<Domain> {
        match (self.exhaustive, &self.profiles, self.sample) {
            (Some(n), _, _) => Ok(Domain::Exhaustive(n)),
            (_, Some(path), _) => Ok(Domain::Explicit(codec::parse_profiles(&read(path)?)?)),
            (_, _, Some(count)) => Ok(Domain::Sampled { n: self.n.expect("required by clap"), count, seed: self.seed }),
            _ => Err(Error::Input("no domain given".into())),
        }
    }
}

/// Command output and exit status.
struct Outcome {
    text: String,
    status: i32,
}

impl Outcome {
    fn new(text: String, ok: bool) -> Self {
        Self { text, status: if ok { EXIT_OK } else { EXIT_FAILED } }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialise");
    s.push('\n');
    s
}

/// Resolves `rsd`, `ps` or `table:<path>`.
pub fn mechanism(selector: &str) -> Result<Box<dyn Mechanism>> {
    match selector {
        "rsd" => Ok(Box::new(Rsd)),
        "ps" => Ok(Box::new(Ps)),
        other => match other.strip_prefix("table:") {
            Some(path) => {
                let entries = codec::parse_table(&read(Path::new(path))?)?;
                Ok(Box::new(TableMechanism::new(path, entries)))
            }
            None => Err(Error::Input(format!("unknown mechanism `{other}` (expected rsd, ps or table:<path>)"))),
        },
    }
}

/// Reads a matrix in text or JSON form, aligned to `profile`'s labels when given.
fn read_matrix(path: &Path, profile: Option<&PreferenceProfile>) -> Result<(Document, Assignment)> {
    let text = read(path)?;
    let (universe, matrix) = if text.trim_start().starts_with('{') {
        let (universe, _, matrix) = codec::from_json(&text)?;
        let matrix = matrix.ok_or_else(|| Error::Input(format!("{}: no matrix", path.display())))?;
        match profile {
            Some(p) => {
                let block = codec::MatrixBlock {
                    agents: universe.agents().to_vec(),
                    objects: universe.objects().to_vec(),
                    rows: matrix.into_rows(),
                };
                (p.universe().clone(), block.align(p.universe())?)
            }
            None => (universe, matrix),
        }
    } else {
        let block = codec::parse_matrix(&text)?;
        match profile {
            Some(p) => (p.universe().clone(), block.align(p.universe())?),
            None => block.into_assignment()?,
        }
    };
    Ok((Document::new(&universe, None, Some(&matrix)), matrix))
}

fn single_profile(path: &Path) -> Result<PreferenceProfile> {
    let mut profiles = codec::parse_profiles(&read(path)?)?;
    if profiles.len() != 1 {
        return Err(Error::Input(format!("{}: expected one profile, found {}", path.display(), profiles.len())));
    }
    Ok(profiles.remove(0))
}

fn eval(config: &RunConfig, selector: &str, path: &Path) -> Result<Outcome> {
    let mech = mechanism(selector)?;
    let profiles = codec::parse_profiles(&read(path)?)?;
    let mut results = Vec::new();
    for p in &profiles {
        results.push((p, mech.evaluate(p)?));
    }
    if config.json {
        let docs: Vec<Document> = results.iter().map(|(p, x)| Document::new(p.universe(), Some(p), Some(x))).collect();
        let value = if docs.len() == 1 { json!(docs[0]) } else { json!(docs) };
        return Ok(Outcome::new(json_text(&value), true));
    }
    let parts: Vec<String> = results
        .iter()
        .map(|(p, x)| format!("{}\n{}", codec::format_profile(p), codec::format_matrix(p.universe(), x)))
        .collect();
    Ok(Outcome::new(parts.join("\n"), true))
}

fn check(config: &RunConfig, selector: &str, names: &[String], domain: &DomainArgs, options: CheckOptions) -> Result<Outcome> {
    let mech = mechanism(selector)?;
    let axioms = names.iter().map(|a| a.parse::<Axiom>()).collect::<Result<Vec<_>>>()?;
    let domain = domain.domain()?;
    let verdicts = check_axioms(&mech, &domain, &axioms, &options)?;
    let ok = verdicts.iter().all(|v| v.holds);
    if config.json {
        let value = json!({
            "mechanism": mech.name(),
            "domain": domain.describe(),
            "global": options.global,
            "holds": ok,
            "verdicts": verdicts.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        });
        return Ok(Outcome::new(json_text(&value), ok));
    }
    let mut text = format!("mechanism {} on {}\n", mech.name(), domain.describe());
    for v in &verdicts {
        text.push_str(&v.to_string());
    }
    Ok(Outcome::new(text, ok))
}

fn efficient(config: &RunConfig, profile: &Path, matrix: Option<&Path>, selector: Option<&str>) -> Result<Outcome> {
    let profile = single_profile(profile)?;
    let x = match (matrix, selector) {
        (Some(path), _) => read_matrix(path, Some(&profile))?.1,
        (None, Some(sel)) => mechanism(sel)?.evaluate(&profile)?,
        (None, None) => return Err(Error::Input("need --matrix or --mechanism".into())),
    };
    let universe = profile.universe();
    let certificate = is_ordinally_efficient(&x, &profile)?;
    let dominator = find_strict_dominator(&x, &profile)?;
    if certificate.is_efficient() != dominator.is_none() {
        return Err(Error::Certification("trading-cycle test and dominator search disagree".into()));
    }
    let ok = certificate.is_efficient();
    if config.json {
        let value = match &certificate {
            EfficiencyCertificate::Efficient { topological_order } => json!({
                "efficient": true,
                "order": topological_order.iter().map(|&j| universe.object(j)).collect::<Vec<_>>(),
            }),
            EfficiencyCertificate::Dominated { cycle, witness } => json!({
                "efficient": false,
                "cycle": cycle.iter().map(|e| json!({
                    "agent": universe.agent(e.agent),
                    "from": universe.object(e.from),
                    "to": universe.object(e.to),
                })).collect::<Vec<_>>(),
                "dominator": Document::new(universe, None, Some(witness)),
            }),
        };
        return Ok(Outcome::new(json_text(&value), ok));
    }
    let text = match &certificate {
        EfficiencyCertificate::Efficient { topological_order } => {
            let names: Vec<&str> = topological_order.iter().map(|&j| universe.object(j)).collect();
            format!("EFFICIENT (acyclic trading relation, order {})\n", names.join(" "))
        }
        EfficiencyCertificate::Dominated { cycle, witness } => {
            let edges: Vec<String> = cycle
                .iter()
                .map(|e| format!("{} -> {} (agent {})", universe.object(e.from), universe.object(e.to), universe.agent(e.agent)))
                .collect();
            format!(
                "DOMINATED (trading cycle {})\nstrict dominator:\n{}",
                edges.join(", "),
                codec::format_matrix(universe, witness)
            )
        }
    };
    Ok(Outcome::new(text, ok))
}

fn bvn(config: &RunConfig, path: &Path) -> Result<Outcome> {
    let (doc, x) = read_matrix(path, None)?;
    let d = bvn_decompose(&x)?;
    let label = |perm: &[usize]| -> Vec<String> {
        perm.iter().enumerate().map(|(i, &j)| format!("{}:{}", doc.agents[i], doc.objects[j])).collect()
    };
    if config.json {
        let value = json!({
            "components": d.components.iter().map(|c| json!({
                "weight": rational::format(&c.weight),
                "permutation": label(&c.permutation),
            })).collect::<Vec<_>>(),
        });
        return Ok(Outcome::new(json_text(&value), true));
    }
    let mut text = String::new();
    for c in &d.components {
        text.push_str(&format!("{} : {}\n", rational::format(&c.weight), label(&c.permutation).join(" ")));
    }
    Ok(Outcome::new(text, true))
}

fn replay_command(config: &RunConfig, theorem: Option<u8>, script: Option<&Path>, pad: usize, dump: bool) -> Result<Outcome> {
    let base = match (theorem, script) {
        (Some(t), _) => builtin_script(t)?,
        (None, Some(path)) => ProofScript::from_json(&read(path)?)?,
        (None, None) => return Err(Error::Input("need --theorem or --script".into())),
    };
    let script = if pad > 0 { pad_script(&base, pad)? } else { base };
    if dump {
        let mut text = script.to_json();
        text.push('\n');
        return Ok(Outcome::new(text, true));
    }
    let report = replay(&script)?;
    let text = if config.json {
        let mut t = report.to_json();
        t.push('\n');
        t
    } else {
        report.render_text()
    };
    Ok(Outcome::new(text, report.success))
}

fn search(config: &RunConfig, theorem: u8, drop: &[String], add: &[String], branch_limit: u64) -> Result<Outcome> {
    let parse = |names: &[String]| names.iter().map(|a| a.parse::<Axiom>()).collect::<Result<Vec<_>>>();
    let options = SearchOptions { drop: parse(drop)?, add: parse(add)?, branch_limit };
    let report = independent_search(theorem, &options)?;
    let unmodified = options.drop.is_empty();
    let (ok, audit) = match &report.verdict {
        SearchVerdict::Infeasible(_) => (true, None),
        SearchVerdict::Inconclusive { .. } => (false, None),
        SearchVerdict::Witness(fragment) => {
            let violations = fragment_satisfies(fragment, &report.axioms)?;
            (!unmodified && violations.is_empty(), Some(violations))
        }
    };
    if config.json {
        let mut value = report.to_json();
        if let Some(v) = &audit {
            value["witness_violations"] = json!(v);
        }
        return Ok(Outcome::new(json_text(&value), ok));
    }
    let mut text = report.to_string();
    if let Some(v) = audit {
        if v.is_empty() {
            text.push_str("\nwitness re-checked against every axiom: ok\n");
        } else {
            text.push_str("\nwitness re-check FAILED:\n");
            for line in v {
                text.push_str(&format!("  {line}\n"));
            }
        }
    }
    Ok(Outcome::new(text, ok))
}

fn dispatch(config: &RunConfig) -> Result<Outcome> {
    match &config.command {
        Command::Eval { mechanism, profile } => eval(config, mechanism, profile),
        Command::Check { mechanism, axioms, domain, global, max_counterexamples } => {
            let options = CheckOptions { global: *global, max_counterexamples: *max_counterexamples };
            check(config, mechanism, axioms, domain, options)
        }
        Command::Efficient { profile, matrix, mechanism } => efficient(config, profile, matrix.as_deref(), mechanism.as_deref()),
        Command::Bvn { matrix } => bvn(config, matrix),
        Command::Replay { theorem, script, pad, dump_script } => {
            replay_command(config, *theorem, script.as_deref(), *pad, *dump_script)
        }
        Command::Search { theorem, drop, add, branch_limit } => search(config, *theorem, drop, add, *branch_limit),
    }
}

fn thread_count(config: &RunConfig) -> Result<Option<usize>> {
    if let Some(k) = config.threads {
        return Ok(Some(k));
    }
    match std::env::var("AXIOMLAB_THREADS") {
        Ok(v) if !v.trim().is_empty() => {
            v.trim().parse().map(Some).map_err(|_| Error::Input(format!("AXIOMLAB_THREADS=`{v}` is not a thread count")))
        }
        _ => Ok(None),
    }
}

/// Runs a configured command, writing the report to `out` and diagnostics and
/// timing to `err`.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let result = thread_count(config).and_then(|threads| match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Input(format!("thread pool: {e}")))?
            .install(|| dispatch(config)),
        None => dispatch(config),
    });
    match result {
        Ok(outcome) => {
            let _ = out.write_all(outcome.text.as_bytes());
            let _ = writeln!(err, "elapsed {:.3}s", start.elapsed().as_secs_f64());
            outcome.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Parses arguments and runs. Usage errors print clap's message and return 2.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config, out, err),
        Err(e) => {
            let help = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            if help {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            } else {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            }
        }
    }
}

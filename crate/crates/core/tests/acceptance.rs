//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use axiomlab::axioms::{
    check_axioms, evaluate_transition, find_strict_dominator, is_expost_efficient, is_ordinally_efficient, Axiom,
    CheckOptions, Domain, Transition,
};
use axiomlab::cli::run_args;
use axiomlab::codec;
use axiomlab::mechanisms::{convex_combination, random_table, Mechanism, Ps, Rsd};
use axiomlab::polytope::{bvn_decompose, entry_var};
use axiomlab::profile::{permutations, PreferenceOrder, Universe};
use axiomlab::proofkit::{
    builtin_script, certify_by_vertices, fragment_satisfies, independent_search, pad_script, replay, theorem_axioms,
    ProofReport, SearchOptions, StepStatus,
};
use axiomlab::rational::{one, rat, zero};
use axiomlab::{ordinal_dominance, Assignment, PreferenceProfile, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> std::result::Result<(), String> {
    ensure(elapsed < limit, format!("took {elapsed:?}, limit {limit:?}"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["axiomlab"];
    argv.extend_from_slice(args);
    let status = run_args(argv, &mut out, &mut err);
    (status, String::from_utf8(out).unwrap())
}

fn strs(row: &[&str]) -> Vec<String> {
    row.iter().map(|s| s.to_string()).collect()
}

fn row_of(report: &ProofReport, node: &str, agent: usize) -> Vec<String> {
    report.node(node).map(|n| n.matrix[agent].clone()).unwrap_or_default()
}

fn matrix(rows: &[[&str; 4]]) -> Assignment {
    let refs: Vec<&[&str]> = rows.iter().map(|r| &r[..]).collect();
    Assignment::from_strs(&refs).unwrap()
}

fn anchors(report: &ProofReport, list: &[(&str, usize, [&str; 4])]) -> std::result::Result<(), String> {
    for (node, agent, row) in list {
        let got = row_of(report, node, *agent);
        ensure(got == strs(row), format!("profile {node} row {}: {got:?}", agent + 1))?;
    }
    Ok(())
}

fn replay_criterion(theorem: u8, list: &[(&str, usize, [&str; 4])], contradiction: &str) -> Outcome {
    let start = Instant::now();
    let (status, text) = cli(&["replay", "--theorem", &theorem.to_string()]);
    ensure(status == 0, format!("exit status {status}"))?;
    ensure(text.contains(&format!("CONTRADICTION: {contradiction}\n")), "contradiction line missing")?;
    let report = replay(&builtin_script(theorem).unwrap()).map_err(|e| e.to_string())?;
    within(start.elapsed(), Duration::from_secs(5))?;
    ensure(report.success, "replay failed")?;
    ensure(report.mismatches().is_empty(), format!("mismatches {:?}", report.mismatches()))?;
    anchors(&report, list)?;
    let shown = report.nodes.iter().filter(|n| !n.auxiliary && n.matrix.iter().flatten().all(|c| c != "?")).count();
    Ok(format!("{shown} complete matrices, {} steps", report.steps.len()))
}

fn criterion_1() -> Outcome {
    let q = "1/4";
    replay_criterion(
        1,
        &[
            ("II", 0, [q, q, "1/3", "1/6"]),
            ("II", 3, [q, q, "0", "1/2"]),
            ("V", 2, [q, "1/3", "1/6", q]),
            ("VII", 2, ["0", "7/12", "1/3", "1/12"]),
            ("VIII", 3, ["1/3", "0", "1/12-x", "7/12+x"]),
        ],
        "entry (3,c) at profile V: derived 1/6, transferred bound [0,1/12]",
    )
}

fn criterion_2() -> Outcome {
    let h = "1/2";
    replay_criterion(
        2,
        &[
            ("I", 0, [h, "0", h, "0"]),
            ("I", 2, ["0", h, "0", h]),
            ("IV", 2, ["0", "3/4", "1/4", "0"]),
            ("VI", 3, ["0", "0", "0", "1"]),
        ],
        "row 4 at profile VII: (4,c)=1/4 + (4,d)=1 = 5/4 > 1",
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut certified = 0;
    for theorem in [1, 2] {
        let report = replay(&builtin_script(theorem).unwrap()).map_err(|e| e.to_string())?;
        for step in report.steps.iter().filter(|s| s.kind == "EfficiencyZero") {
            ensure(step.status == StepStatus::Applied, format!("{} not applied", step.description))?;
            ensure(
                step.detail.contains("vert") && !step.detail.contains("faces"),
                format!("{} not vertex-certified: {}", step.description, step.detail),
            )?;
            certified += 1;
        }
    }
    let uniform = PreferenceProfile::from_strs(&["a>b>c>d"; 4]).unwrap();
    let mut equal_rows = Vec::new();
    for k in 1..4 {
        for j in 0..4 {
            equal_rows.push((vec![(entry_var(4, 0, j), one()), (entry_var(4, k, j), -one())], zero()));
        }
    }
    ensure(certify_by_vertices(&uniform, &equal_rows, (0, 0)).is_err(), "negative control certified")?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{certified} steps vertex-certified, negative control refused"))
}

fn criterion_4() -> Outcome {
    let q = "1/4";
    let h = "1/2";
    let cases = [
        ("1: a>b>c>d\n2: a>b>c>d\n3: a>b>c>d\n4: a>b>c>d\n", [[q, q, q, q], [q, q, q, q], [q, q, q, q], [q, q, q, q]]),
        (
            "1: a>b>c>d\n2: a>b>c>d\n3: a>b>c>d\n4: a>b>d>c\n",
            [[q, q, "1/3", "1/6"], [q, q, "1/3", "1/6"], [q, q, "1/3", "1/6"], [q, q, "0", h]],
        ),
        ("1: a>b>c>d\n2: a>b>c>d\n3: b>a>d>c\n4: b>a>d>c\n", [[h, "0", h, "0"], [h, "0", h, "0"], ["0", h, "0", h], ["0", h, "0", h]]),
    ];
    let dir = std::env::temp_dir().join(format!("axiomlab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (k, (profile, rows)) in cases.iter().enumerate() {
        let path = dir.join(format!("p{k}.prof"));
        std::fs::write(&path, profile).unwrap();
        let (status, out) = cli(&["eval", "--mechanism", "ps", "--profile", path.to_str().unwrap(), "--json"]);
        ensure(status == 0, format!("exit status {status}"))?;
        let (_, _, m) = codec::from_json(&out).map_err(|e| e.to_string())?;
        ensure(m.as_ref() == Some(&matrix(rows)), format!("profile {k}: {m:?}"))?;
    }
    Ok("3 profiles match".into())
}

fn brute_rsd(p: &PreferenceProfile) -> Assignment {
    let n = p.n();
    let mut acc = vec![vec![zero(); n]; n];
    let orders = permutations(n);
    for priority in &orders {
        let mut taken = vec![false; n];
        for &agent in priority {
            let pick = *p.order(agent).ranking().iter().find(|&&o| !taken[o]).unwrap();
            taken[pick] = true;
            acc[agent][pick] += rat(1, orders.len() as i64);
        }
    }
    Assignment::new(acc).unwrap()
}

fn criterion_5() -> Outcome {
    let p = PreferenceProfile::from_strs(&["a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"]).unwrap();
    let rsd = Rsd.evaluate(&p).map_err(|e| e.to_string())?;
    let (a, b) = ("5/12", "1/12");
    ensure(rsd == matrix(&[[a, b, a, b], [a, b, a, b], [b, a, b, a], [b, a, b, a]]), "RSD rows differ")?;
    ensure(rsd == brute_rsd(&p), "RSD differs from brute force")?;
    let expost = is_expost_efficient(&rsd, &p).map_err(|e| e.to_string())?;
    ensure(expost.efficient, "RSD not ex-post efficient")?;
    let total: Rational = expost.decomposition.iter().map(|(w, _)| w.clone()).sum();
    ensure(total == one(), "witness weights do not sum to 1")?;
    ensure(find_strict_dominator(&rsd, &p).unwrap().is_some(), "no dominator found")?;
    let ps = Ps.evaluate(&p).unwrap();
    ensure(ordinal_dominance(&ps, &rsd, &p).unwrap().strictly(), "PS does not strictly dominate RSD")?;
    Ok(format!("ex-post witness over {} permutations, PS dominates", expost.decomposition.len()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let domain = Domain::Exhaustive(3);
    let options = CheckOptions::default();
    let rsd_axioms = [Axiom::LocalSp, Axiom::SwapMonotonicity, Axiom::UpperInvariance, Axiom::LowerInvariance, Axiom::Symmetry];
    let ps_axioms = [
        Axiom::SwapMonotonicity,
        Axiom::UpperInvariance,
        Axiom::OrdinalEfficiency,
        Axiom::Symmetry,
        Axiom::Anonymity,
        Axiom::Neutrality,
        Axiom::NonBossiness,
    ];
    let mut count = 0;
    for (mech, axioms) in [(&Rsd as &dyn Mechanism, &rsd_axioms[..]), (&Ps, &ps_axioms[..])] {
        for v in check_axioms(mech, &domain, axioms, &options).map_err(|e| e.to_string())? {
            ensure(v.holds, format!("{}: {}", mech.name(), v.summary()))?;
            count += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("{count} verdicts hold on 216 profiles"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let domain = Domain::Sampled { n: 4, count: 1000, seed: 20240 };
    let axioms = [Axiom::UpperInvariance, Axiom::SwapMonotonicity, Axiom::LowerInvariance, Axiom::LocalSp];
    let v = check_axioms(&Ps, &domain, &axioms, &CheckOptions::default()).map_err(|e| e.to_string())?;
    ensure(v[0].holds && v[1].holds, format!("{} / {}", v[0].summary(), v[1].summary()))?;
    ensure(v[0].transitions == Some(1000), "fewer than 1000 transitions")?;
    ensure(!v[2].holds && !v[3].holds, "no lower-invariance or local-SP violation found")?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{} LI and {} SP violations in 1000 transitions", v[2].violations, v[3].violations))
}

fn criterion_8() -> Outcome {
    let profiles = PreferenceProfile::all(3).unwrap();
    let mut mechs: Vec<Box<dyn Mechanism>> =
        (0..100).map(|s| Box::new(random_table(3, &profiles, s).unwrap()) as Box<dyn Mechanism>).collect();
    mechs.push(Box::new(Rsd));
    mechs.push(Box::new(Ps));
    let mut transitions = 0;
    for mech in &mechs {
        for p in &profiles {
            let x = mech.evaluate(p).unwrap();
            for t in Transition::all_adjacent(p) {
                let y = mech.evaluate(&t.misreport).unwrap();
                let c = evaluate_transition(&t, &x, &y);
                let sp = c.local_sp && c.local_sp_reverse;
                let parts = c.swap_monotonicity.unwrap() && c.upper_invariance.unwrap() && c.lower_invariance.unwrap();
                ensure(sp == parts, format!("{} disagrees at {p}", mech.name()))?;
                transitions += 1;
            }
        }
    }
    Ok(format!("0 disagreements over {transitions} transitions"))
}

fn criterion_9() -> Outcome {
    let agree = |x: &Assignment, p: &PreferenceProfile| {
        is_ordinally_efficient(x, p).unwrap().is_efficient() == find_strict_dominator(x, p).unwrap().is_none()
    };
    let mut checked = 0;
    for p in PreferenceProfile::all(3).unwrap() {
        for mech in [&Rsd as &dyn Mechanism, &Ps] {
            ensure(agree(&mech.evaluate(&p).unwrap(), &p), format!("{} at {p}", mech.name()))?;
            checked += 1;
        }
    }
    let universe = Arc::new(Universe::standard(4).unwrap());
    let perms = permutations(4);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..1000 {
        let orders = (0..4).map(|_| PreferenceOrder::new(perms.choose(&mut rng).unwrap().clone()).unwrap()).collect();
        let p = PreferenceProfile::new(universe.clone(), orders).unwrap();
        let k = rng.gen_range(1..=4);
        let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
        let total: i64 = raw.iter().sum();
        let weights: Vec<Rational> = raw.iter().map(|&w| rat(w, total)).collect();
        let chosen: Vec<Vec<usize>> = (0..k).map(|_| perms.choose(&mut rng).unwrap().clone()).collect();
        let x = convex_combination(&weights, &chosen).unwrap();
        ensure(agree(&x, &p), format!("random matrix at {p}"))?;
        checked += 1;
    }
    Ok(format!("0 disagreements over {checked} matrices"))
}

fn criterion_10() -> Outcome {
    let mut count = 0;
    for theorem in [1, 2] {
        let script = builtin_script(theorem).unwrap();
        for node in &script.nodes {
            let Some(rows) = &node.expected else { continue };
            let xs: Vec<Rational> = if node.parameter.is_some() { vec![rat(0, 1), rat(1, 24), rat(1, 12)] } else { vec![zero()] };
            for x in xs {
                let parsed: Option<Vec<Vec<Rational>>> = rows
                    .iter()
                    .map(|r| r.iter().map(|c| eval_cell(c, &x)).collect::<Option<Vec<_>>>())
                    .collect();
                let Some(parsed) = parsed else { continue };
                let Ok(m) = Assignment::new(parsed) else { continue };
                let d = bvn_decompose(&m).map_err(|e| e.to_string())?;
                ensure(d.reconstruct(4) == m.rows(), format!("{} does not reconstruct", node.name))?;
                ensure(d.len() <= 10, format!("{} used {} components", node.name, d.len()))?;
                ensure(d.total_weight() == one(), format!("{} weights", node.name))?;
                count += 1;
            }
        }
    }
    ensure(count >= 20, format!("only {count} matrices decomposed"))?;
    Ok(format!("{count} matrices reconstructed"))
}

/// Cells are rationals or `x`, `c-x`, `c+x`.
fn eval_cell(cell: &str, x: &Rational) -> Option<Rational> {
    if cell == "x" {
        return Some(x.clone());
    }
    if let Some(c) = cell.strip_suffix("-x") {
        return axiomlab::rational::parse(c).ok().map(|c| c - x.clone());
    }
    if let Some(c) = cell.strip_suffix("+x") {
        return axiomlab::rational::parse(c).ok().map(|c| c + x.clone());
    }
    axiomlab::rational::parse(cell).ok()
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    for theorem in [1, 2] {
        let r = independent_search(theorem, &SearchOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.verdict.is_infeasible(), format!("theorem {theorem} not infeasible"))?;
    }
    let (status, out) = cli(&["search", "--theorem", "1", "--drop", "lower-invariance"]);
    ensure(status == 0 && out.contains("WITNESS"), format!("drop LI: exit {status}"))?;
    let options = SearchOptions { drop: vec![Axiom::LowerInvariance], ..SearchOptions::default() };
    let report = independent_search(1, &options).map_err(|e| e.to_string())?;
    ensure(report.verdict.witness().is_some(), "no witness")?;
    let remaining: Vec<Axiom> = theorem_axioms(1).unwrap().into_iter().filter(|a| *a != Axiom::LowerInvariance).collect();
    let ps: Vec<(PreferenceProfile, Assignment)> =
        report.profiles.iter().map(|(_, p)| (p.clone(), Ps.evaluate(p).unwrap())).collect();
    let violations = fragment_satisfies(&ps, &remaining).map_err(|e| e.to_string())?;
    ensure(violations.is_empty(), format!("PS violates {violations:?}"))?;
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!("both infeasible, witness on {} profiles, PS satisfies the rest", report.profiles.len()))
}

fn criterion_12() -> Outcome {
    let (status, out) = cli(&["replay", "--theorem", "1", "--pad", "1"]);
    ensure(status == 0 && out.contains("replay succeeded"), format!("exit {status}"))?;
    let script = pad_script(&builtin_script(1).unwrap(), 1).map_err(|e| e.to_string())?;
    ensure(script.agents.len() == 5, "not n=5")?;
    let report = replay(&script).map_err(|e| e.to_string())?;
    ensure(report.success, "padded replay failed")?;
    for node in report.nodes.iter().filter(|n| !n.auxiliary) {
        ensure(node.matrix[4] == strs(&["0", "0", "0", "0", "1"]), format!("{} row 5: {:?}", node.name, node.matrix[4]))?;
        ensure(node.matrix[..4].iter().all(|r| r[4] == "0"), format!("{} column e", node.name))?;
    }
    Ok(format!("{} profiles at n=5, agent 5 gets e", report.nodes.iter().filter(|n| !n.auxiliary).count()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("theorem 1 replay", criterion_1),
        ("theorem 2 replay", criterion_2),
        ("efficiency-zero certification", criterion_3),
        ("PS golden outputs", criterion_4),
        ("RSD vs PS refinement gap", criterion_5),
        ("axiom suite n=3", criterion_6),
        ("axiom suite n=4 sampled", criterion_7),
        ("decomposition equivalence", criterion_8),
        ("efficiency oracle agreement", criterion_9),
        ("BvN of proof matrices", criterion_10),
        ("independent infeasibility search", criterion_11),
        ("padding", criterion_12),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {title}: {detail} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {title}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

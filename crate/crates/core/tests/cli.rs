use std::fs;
use std::path::PathBuf;
use std::process::Command;

use axiomlab::cli::run_args;
use axiomlab::codec;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["axiomlab"];
    argv.extend_from_slice(args);
    let status = run_args(argv, &mut out, &mut err);
    (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

const TWO_PAIRS: &str = "1: a>b>c>d\n2: a>b>c>d\n3: b>a>d>c\n4: b>a>d>c\n";

#[test]
fn eval_prints_ps_matrix() {
    let path = scratch("pairs.prof", TWO_PAIRS);
    let (status, out, err) = run(&["eval", "--mechanism", "ps", "--profile", &path]);
    assert_eq!(status, 0);
    assert!(out.contains("1: 1/2 0 1/2 0\n") && out.contains("4: 0 1/2 0 1/2\n"), "{out}");
    assert!(err.contains("elapsed"));
    assert!(!out.contains("elapsed"));
}

#[test]
fn eval_json_round_trips() {
    let path = scratch("pairs_json.prof", TWO_PAIRS);
    let (status, out, _) = run(&["eval", "--mechanism", "rsd", "--profile", &path, "--json"]);
    assert_eq!(status, 0);
    let (_, profile, matrix) = codec::from_json(&out).unwrap();
    let profile = profile.unwrap();
    assert_eq!(profile, codec::parse_profile(TWO_PAIRS).unwrap());
    assert_eq!(axiomlab::rational::format(matrix.unwrap().entry(0, 0)), "5/12");
}

#[test]
fn check_exhaustive_rsd() {
    let (status, out, _) = run(&["check", "--mechanism", "rsd", "--axiom", "local-sp", "--exhaustive", "3"]);
    assert_eq!(status, 0);
    assert!(out.contains("HOLDS (216 profiles, 1296 transitions)"), "{out}");
}

#[test]
fn check_reports_violations_with_status_one() {
    let args = ["check", "--mechanism", "ps", "--axiom", "li", "--sample", "300", "--n", "4", "--seed", "11"];
    let (status, out, _) = run(&args);
    assert_eq!(status, 1);
    assert!(out.contains("seed=11") && out.contains("VIOLATED"), "{out}");
    let (again, out2, _) = run(&args);
    assert_eq!((again, &out2), (1, &out));
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "3"]);
    assert_eq!(run(&threaded).1, out);
}

#[test]
fn check_on_a_table_file() {
    let table = format!("{TWO_PAIRS}\na b c d\n1/2 0 1/2 0\n1/2 0 1/2 0\n0 1/2 0 1/2\n0 1/2 0 1/2\n");
    let path = scratch("one.table", &table);
    let selector = format!("table:{path}");
    let profiles = scratch("one_table.prof", TWO_PAIRS);
    let (status, out, _) = run(&["check", "--mechanism", &selector, "--axiom", "oe,symmetry", "--profiles", &profiles]);
    assert_eq!(status, 0, "{out}");
    assert!(out.contains("ordinal-efficiency: HOLDS (1 profiles)"), "{out}");
}

#[test]
fn efficient_flags_rsd() {
    let path = scratch("pairs_eff.prof", TWO_PAIRS);
    let (status, out, _) = run(&["efficient", "--mechanism", "rsd", "--profile", &path]);
    assert_eq!(status, 1);
    assert!(out.starts_with("DOMINATED"), "{out}");
    let (status, out, _) = run(&["efficient", "--mechanism", "ps", "--profile", &path]);
    assert_eq!(status, 0);
    assert!(out.starts_with("EFFICIENT"), "{out}");
}

#[test]
fn bvn_lines() {
    let path = scratch("half.mat", "a b\n1/2 1/2\n1/2 1/2\n");
    let (status, out, _) = run(&["bvn", "--matrix", &path]);
    assert_eq!(status, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l.starts_with("1/2 : ")), "{out}");
}

#[test]
fn replay_theorem_one() {
    let (status, out, _) = run(&["replay", "--theorem", "1"]);
    assert_eq!(status, 0);
    assert_eq!(out.matches("\nprofile ").count(), 8);
    assert!(out.contains("CONTRADICTION: entry (3,c) at profile V: derived 1/6, transferred bound [0,1/12]\n"));
}

#[test]
fn replay_dumped_script() {
    let (_, script, _) = run(&["replay", "--theorem", "2", "--dump-script"]);
    let path = scratch("theorem2.json", &script);
    let (status, out, _) = run(&["replay", "--script", &path, "--json"]);
    assert_eq!(status, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["success"], true);
    assert_eq!(v["contradiction"], "row 4 at profile VII: (4,c)=1/4 + (4,d)=1 = 5/4 > 1");
}

#[test]
fn replay_padded() {
    let (status, out, _) = run(&["replay", "--theorem", "1", "--pad", "1"]);
    assert_eq!(status, 0, "{out}");
    assert!(out.contains("replay succeeded"));
}

#[test]
fn search_budget_exhaustion_is_status_one() {
    let (status, out, _) = run(&["search", "--theorem", "1", "--branch-limit", "2"]);
    assert_eq!(status, 1);
    assert!(out.contains("INCONCLUSIVE"), "{out}");
}

#[test]
fn input_errors_are_status_two() {
    let path = scratch("pairs_err.prof", TWO_PAIRS);
    assert_eq!(run(&["eval", "--mechanism", "nope", "--profile", &path]).0, 2);
    assert_eq!(run(&["eval", "--mechanism", "ps", "--profile", "/no/such/file"]).0, 2);
    assert_eq!(run(&["replay", "--theorem", "3"]).0, 2);
    assert_eq!(run(&["check", "--mechanism", "ps", "--axiom", "ui"]).0, 2);
    assert_eq!(run(&["check", "--mechanism", "ps", "--axiom", "nonsense", "--exhaustive", "2"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    let bad = scratch("bad.mat", "a b\n1/2 1/2\n1/2 1/3\n");
    let (status, _, err) = run(&["bvn", "--matrix", &bad]);
    assert_eq!(status, 2);
    assert_eq!(err.lines().count(), 1, "{err}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_axiomlab");
    let ok = Command::new(bin).args(["replay", "--theorem", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("5/4 > 1"));
    let bad = Command::new(bin).args(["eval", "--mechanism", "x", "--profile", "y"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let threads = Command::new(bin)
        .args(["check", "--mechanism", "ps", "--axiom", "ui", "--exhaustive", "3"])
        .env("AXIOMLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(0));
    let broken = Command::new(bin)
        .args(["check", "--mechanism", "ps", "--axiom", "ui", "--exhaustive", "3"])
        .env("AXIOMLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(broken.status.code(), Some(2));
}

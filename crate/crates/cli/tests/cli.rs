use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cgt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgt")).args(args).output().expect("binary runs")
}

/// Exit code and parsed stdout payload.
fn run(args: &[&str]) -> (i32, Value) {
    let out = cgt(args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let payload = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {stdout:?}"));
    (out.status.code().unwrap(), payload)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_separating_singletons() {
    let (code, v) = run(&["check", path_str(&fixture("singletons.json")), "d-separating", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], true);
}

#[test]
fn check_model1_on_k4_pairs() {
    let (code, v) = run(&["check", path_str(&fixture("pairs_k4.json")), "model1", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["solves"], true);
}

#[test]
fn check_false_property_exits_one_with_witness() {
    let (code, v) = run(&["check", path_str(&fixture("pairs_k4.json")), "d-cover-free", "--d", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["holds"], false);
    assert!(v["witness"]["sets"].is_array());
}

#[test]
fn check_usage_errors() {
    let (code, v) = run(&["check", path_str(&fixture("singletons.json")), "nosuch"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("unknown property"));
    let (code, _) = run(&["check", path_str(&fixture("out_of_range.json")), "sperner"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["check", path_str(&fixture("singletons.json")), "d-separating"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["check", "/nonexistent/family.json", "sperner"]);
    assert_eq!(code, 2);
    // clap's own usage errors also use exit code 2
    assert_eq!(cgt(&["check"]).status.code(), Some(2));
}

#[test]
fn construct_binary_separating() {
    let (code, v) = run(&["construct", "binary-separating", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["family"]["sets"], serde_json::json!([[2, 4], [3, 4]]));
    assert_eq!(v["validation"]["holds"], true);
}

#[test]
fn construct_model3_writes_a_validated_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m3.json");
    let (code, v) = run(&["construct", "model3", "--n", "40", "--d", "2", "--seed", "1", "--out", path_str(&out)]);
    assert_eq!(code, 0);
    assert_eq!(v["sets"], 20);
    assert_eq!(v["validation"]["holds"], true);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written, v["family"]);
    assert!(written["sets"].as_array().unwrap().iter().all(|s| s.as_array().unwrap().len() == 4));
}

#[test]
fn construct_infeasible_girth_hypergraph_exits_three() {
    let (code, v) = run(&["construct", "girth-hypergraph", "--n", "7", "--r", "3", "--d", "3", "--g", "5"]);
    assert_eq!(code, 3);
    assert!(v["error"].is_string());
    let (code, _) = run(&["construct", "girth-hypergraph", "--n", "10", "--r", "3", "--d", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn simulate_halving_batch() {
    let (code, v) = run(&["simulate", "halving-model3", "--n", "200", "--d", "2", "--random", "50", "--seed", "9"]);
    assert_eq!(code, 0);
    assert_eq!(v["runs"], 50);
    assert!(v["max_queries"].as_u64().unwrap() <= 42);
    assert_eq!(v["all_correct"], true);
    assert_eq!(v["all_verified"], true);
}

#[test]
fn simulate_halving_small_n_exits_three() {
    let (code, v) = run(&["simulate", "halving-model3", "--n", "20", "--d", "2"]);
    assert_eq!(code, 3);
    assert!(v["error"].as_str().unwrap().contains("NO-answered"));
}

#[test]
fn simulate_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let (code, v) = run(&[
        "simulate",
        "find-announce-model2prime",
        "--n",
        "32",
        "--d",
        "2",
        "--oracle",
        "3,17",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["all_verified"], true);
    let transcript: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(transcript["verdict"], serde_json::json!([3, 17]));

    let (code, v) = run(&["verify", path_str(&out), "model2prime"]);
    assert_eq!((code, v["solves"].clone()), (0, Value::Bool(true)));
    let (code, v) = run(&["verify", path_str(&out), "model3"]);
    assert_eq!(code, 1);
    assert_eq!(v["failing_case"]["clause"]["kind"], "defective_exposed");
}

#[test]
fn verify_rejects_malformed_and_incomplete_transcripts() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\":3}").unwrap();
    assert_eq!(run(&["verify", path_str(&bad), "model1"]).0, 2);
    std::fs::write(&bad, r#"{"n":3,"d":1,"steps":[{"q":[1],"a":true}],"verdict":null}"#).unwrap();
    assert_eq!(run(&["verify", path_str(&bad), "model1"]).0, 2);
    assert_eq!(run(&["verify", path_str(&bad), "model9"]).0, 2);
}

#[test]
fn sweeps_report_zero_mismatches() {
    let (code, v) = run(&["sweep", "model1d", "--n", "4", "--max-sets", "4", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!((v["families"].as_u64(), v["mismatches"].as_u64()), (Some(1940), Some(0)));
    let (code, v) = run(&["sweep", "claim-canc", "--n", "4", "--max-sets", "4"]);
    assert_eq!((code, v["mismatches"].as_u64()), (0, Some(0)));
    let (code, v) = run(&["sweep", "model2-impossible", "--n", "4", "--max-sets", "4", "--d", "2"]);
    assert_eq!((code, v["mismatches"].as_u64()), (0, Some(0)));
}

#[test]
fn sweep_is_reproducible_and_budget_guarded() {
    let args = ["sweep", "model2dbl", "--n", "5", "--max-sets", "5", "--d", "2", "--random", "200", "--seed", "4"];
    let a = cgt(&args);
    let b = cgt(&["--jobs", "1"].iter().chain(&args).copied().collect::<Vec<_>>());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let (code, v) = run(&["sweep", "intcan", "--n", "5", "--max-sets", "2"]);
    assert_eq!(code, 3);
    assert!(v["error"].as_str().unwrap().contains("cap"));
    let out = Command::new(env!("CARGO_BIN_EXE_cgt"))
        .args(["sweep", "intcan", "--n", "5", "--max-sets", "2"])
        .env("GT_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let (code, _) = run(&["sweep", "nosuch", "--n", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn human_summary_goes_to_stderr() {
    let out = cgt(&["construct", "binary-separating", "--n", "8"]);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("binary-separating: 3 sets"));
}

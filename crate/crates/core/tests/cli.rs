use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levelset-lab")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn qr_demo_at_seven() {
    let out = run(&["qr-demo", "--n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "levelset-lab/1");
    assert_eq!(v["results"]["convolution"], serde_json::json!([0, 1, 1, 2, 1, 2, 2]));
    assert_eq!(v["results"]["convolution_at_zero"], 0);
}

#[test]
fn dirichlet_at_seven() {
    let out = run(&["dirichlet", "--n", "7", "--xs", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["n"], 2);
}

#[test]
fn verify_lemmas_passes() {
    let out = run(&["verify-lemmas", "--group", "Z101", "--trials", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn findings_exit_one() {
    // Cauchy–Davenport rules out the sumset bound at 499.
    let out = run(&["thm2-construct", "--n", "499", "--trials", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert!(!v["findings"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["qr-demo"]).status.code(), Some(2));
    assert_eq!(run(&["qr-demo", "--n", "15"]).status.code(), Some(2));
    assert_eq!(run(&["dirichlet", "--n", "1", "--xs", "0"]).status.code(), Some(2));
    let missing_seed = run(&["thm4-bohr-translate", "--group", "Z499", "--delta", "0.5", "--eps", "0.3"]);
    assert_eq!(missing_seed.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing_seed.stderr).contains("--seed"));
}

#[test]
fn malformed_set_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "1\nx\n");
    let out_of_range = write(dir.path(), "range.txt", "9\n");
    assert_eq!(run(&["sumset", "--group", "Z7", "--set", &bad]).status.code(), Some(2));
    assert_eq!(run(&["sumset", "--group", "Z7", "--set", &out_of_range]).status.code(), Some(2));
    assert_eq!(run(&["sumset", "--group", "Z7", "--set", "/nonexistent/set.txt"]).status.code(), Some(2));
}

#[test]
fn out_writes_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let set = write(dir.path(), "a.txt", "1\n2\n4\n");
    let out = dir.path().join("r.json");
    let csv = dir.path().join("c.csv");
    let res = run(&[
        "convolve",
        "--group",
        "Z7",
        "--set",
        &set,
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let report = std::fs::read(&out).unwrap();
    assert_eq!(report, res.stdout);
    let manifest: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("r.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "convolve");
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 2);
    let digest = hex::encode(Sha256::digest(&report));
    assert!(outputs.iter().any(|o| o["sha256"] == digest.as_str()));
    assert!(std::fs::read_to_string(&csv).unwrap().lines().count() > 7);
}

#[test]
fn product_group_set_file() {
    let dir = tempfile::tempdir().unwrap();
    let set = write(dir.path(), "a.txt", "# comment\n0,0\n1, 2\n");
    let out = run(&["sumset", "--group", "Z3xZ5", "--set", &set]);
    assert_eq!(out.status.code(), Some(0));
}

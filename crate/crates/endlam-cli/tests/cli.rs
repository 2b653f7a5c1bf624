// SPDX-License-Identifier: MIT OR Apache-2.0
//! The `endlam` binary: exit codes, manifests, configuration and determinism.

use sha2::{Digest, Sha256};
use std::path::Path;
use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn endlam(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_endlam")).args(args).current_dir(dir).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn build(dir: &Path, p: &str, e0: &str, ratio: &str, depth: &str) {
    let r = endlam(dir, &["--out", "seq.json", "build", "--p", p, "--e0", e0, "--ratio", ratio, "--depth", depth]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

fn manifest(dir: &Path, out: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(dir.join(format!("{out}.manifest.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn sha256(path: &Path) -> String {
    hex::encode(Sha256::digest(std::fs::read(path).unwrap()))
}

#[test]
fn build_and_verify_succeed() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path(), "5", "16", "2", "10");
    let r = endlam(dir.path(), &["--out", "report.csv", "verify-p", "--seq", "seq.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(report.starts_with("clause,k,status,detail\n"));
    assert!(report.lines().skip(1).all(|l| l.contains(",pass,")));
}

#[test]
fn manifests_record_inputs_outputs_and_constants() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path(), "5", "16", "2", "8");
    let m = manifest(dir.path(), "seq.json");
    assert_eq!(m["tool"], "endlam");
    assert_eq!(m["command"], "build");
    assert_eq!(m["passed"], true);
    assert_eq!(m["outputs"]["seq.json"], sha256(&dir.path().join("seq.json")));

    std::fs::write(dir.path().join("consts.txt"), "# relaxed\nB0 = 2\ng0=3\ndelta = 3\n").unwrap();
    let r = endlam(
        dir.path(),
        &["--constants", "consts.txt", "--out", "t.csv", "intersections", "--seq", "seq.json", "--all"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let m = manifest(dir.path(), "t.csv");
    assert_eq!(m["inputs"]["seq.json"], sha256(&dir.path().join("seq.json")));
    assert_eq!(m["inputs"]["consts.txt"], sha256(&dir.path().join("consts.txt")));
    assert_eq!(m["constants"]["verifier"]["b0"], 2);
    assert_eq!(m["constants"]["verifier"]["b"], 3);
    assert_eq!(m["constants"]["delta"], 3);
}

#[test]
fn usage_and_domain_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let r = endlam(dir.path(), &["build", "--p", "6", "--e0", "1", "--ratio", "2", "--depth", "4"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("endlam:"));
    assert_eq!(endlam(dir.path(), &["build", "--bogus"]).code, 2);
    assert_eq!(endlam(dir.path(), &["frobnicate"]).code, 2);
    assert_eq!(endlam(dir.path(), &["verify-p", "--seq", "missing.json"]).code, 2);
    assert_eq!(endlam(dir.path(), &["build", "--p", "5", "--e0", "0", "--ratio", "2", "--depth", "4"]).code, 2);
    assert_eq!(endlam(dir.path(), &["build", "--p", "5", "--e0", "1", "--ratio", "1/2", "--depth", "4"]).code, 2);

    build(dir.path(), "5", "16", "2", "10");
    std::fs::write(dir.path().join("bad.txt"), "B0 = 2\nB0 = 3\n").unwrap();
    assert_eq!(endlam(dir.path(), &["--constants", "bad.txt", "verify-p", "--seq", "seq.json"]).code, 2);
    std::fs::write(dir.path().join("bad.txt"), "kappa = 2\n").unwrap();
    assert_eq!(endlam(dir.path(), &["--constants", "bad.txt", "verify-p", "--seq", "seq.json"]).code, 2);
    assert_eq!(endlam(dir.path(), &["limit-trace", "--seq", "seq.json", "--p7"]).code, 2);
    assert_eq!(endlam(dir.path(), &["intersections", "--seq", "seq.json", "--pairs", "0,99"]).code, 2);
}

#[test]
fn help_and_version_exit_with_zero() {
    let dir = tempfile::tempdir().unwrap();
    let r = endlam(dir.path(), &["--version"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("endlam "));
    let r = endlam(dir.path(), &["--help"]);
    assert_eq!(r.code, 0);
    for cmd in ["build", "verify-p", "intersections", "annular", "distance", "ergodic", "limit-trace"] {
        assert!(r.stdout.contains(cmd), "{cmd} listed");
    }
}

#[test]
fn tampered_sequences_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path(), "5", "16", "2", "8");
    let path = dir.path().join("seq.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["curves"][6]["coords"][0] = serde_json::Value::String("12345".into());
    std::fs::write(&path, serde_json::to_string(&value).unwrap()).unwrap();
    assert_eq!(endlam(dir.path(), &["verify-p", "--seq", "seq.json"]).code, 2);
}

#[test]
fn unmet_checks_exit_with_one() {
    // Exact coefficients beyond the oracle cap are skipped, and a skipped
    // check is not a pass.
    let dir = tempfile::tempdir().unwrap();
    build(dir.path(), "5", "304", "2", "8");
    let r = endlam(dir.path(), &["--out", "a.csv", "annular", "--seq", "seq.json", "--mode", "exact"]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    let csv = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert!(csv.contains(",skipped,"));
    assert_eq!(manifest(dir.path(), "a.csv")["passed"], false);
    let r = endlam(dir.path(), &["--out", "a.csv", "annular", "--seq", "seq.json", "--mode", "estimate"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn annular_triples_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path(), "5", "2", "1", "8");
    std::fs::write(dir.path().join("triples.csv"), "i,k,j\n0,2,4\n0,3,6\n").unwrap();
    let r = endlam(
        dir.path(),
        &["--out", "a.csv", "annular", "--seq", "seq.json", "--triples", "triples.csv", "--mode", "exact"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let csv = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[1][..6], ["0", "3", "6", "5", "0", "exact"]);
}

#[test]
fn jobs_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path(), "7", "16", "2", "12");
    let one = endlam(dir.path(), &["--jobs", "1", "--out", "one.csv", "intersections", "--seq", "seq.json", "--all"]);
    let two = endlam(dir.path(), &["--jobs", "2", "--out", "two.csv", "intersections", "--seq", "seq.json", "--all"]);
    assert_eq!((one.code, two.code), (0, 0));
    assert_eq!(std::fs::read(dir.path().join("one.csv")).unwrap(), std::fs::read(dir.path().join("two.csv")).unwrap());
}

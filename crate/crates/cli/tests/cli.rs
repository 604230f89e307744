use std::path::Path;
use std::process::{Command, Output};

use zetasum_cli::emit::from_json;

fn zetasum(golden: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetasum"))
        .args(args)
        .env("ZETASUM_GOLDEN_DIR", golden)
        .output()
        .expect("spawn zetasum")
}

fn copy_golden(to: &Path) {
    let from = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden");
    for e in std::fs::read_dir(from).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, to.join(p.file_name().unwrap())).unwrap();
    }
}

#[test]
fn list_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetasum(dir.path(), &["list-suites"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 15);
    assert!(text.lines().any(|l| l.starts_with("chi\t")));
}

#[test]
fn unknown_suite_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetasum(dir.path(), &["run", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("nope") && err.contains("fg-identity") && err.contains("determinism"), "{err}");
}

#[test]
fn bad_grid_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetasum(dir.path(), &["run", "--suite", "d-growth", "--points", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_prints_double_double() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"phase":"F3","sigma":0,"t":0,"lo":1,"hi":10}"#;
    let out = zetasum(dir.path(), &["oracle", "--spec", spec]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["re"].as_f64(), Some(10.0));
    assert_eq!(v["im"].as_f64(), Some(0.0));
    assert_eq!(v["terms"].as_u64(), Some(10));

    let empty = r#"{"phase":"F1","sigma":0.5,"t":5,"lo":4,"hi":3}"#;
    let out = zetasum(dir.path(), &["oracle", "--spec", empty]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["empty"].as_bool(), Some(true));
}

#[test]
fn json_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chi.json");
    let out = zetasum(
        dir.path(),
        &[
            "run",
            "--suite",
            "chi",
            "--t-min",
            "100",
            "--t-max",
            "1000",
            "--points",
            "5",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(recs.iter().all(|r| r.claim_id == "chi"));
    assert_eq!(recs[0].rows.len(), 5);
}

#[test]
fn csv_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetasum(dir.path(), &["run", "--suite", "square-relation", "--sigma", "0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("claim_id,sigma,t,"));
    assert_eq!(text.lines().count(), 1 + 3);
}

#[test]
fn exceeded_golden_fails_claim() {
    let dir = tempfile::tempdir().unwrap();
    copy_golden(dir.path());
    let ok = zetasum(dir.path(), &["run", "--suite", "f2-bounded"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    let path = dir.path().join("f2-bounded-sigma0.5.json");
    let mut g: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    g["constant"] = serde_json::json!(1e-3);
    std::fs::write(&path, serde_json::to_string(&g).unwrap()).unwrap();
    let bad = zetasum(dir.path(), &["run", "--suite", "f2-bounded"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn first_run_freezes_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetasum(dir.path(), &["run", "--suite", "j2-asymptotic"]);
    assert!(out.status.success());
    assert!(dir.path().join("j2-sigma0.5-delta0.4.json").exists());
}

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn mukai(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mukai")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const TRIPLE: &str = r#"{"surface":{"kind":"K3","ns":{"rank":2,"gram":[[-2,1],[1,0]]},"ample":[1,3],
"ample_constraints":[[1,0],[0,1]]},"v":{"r":4,"c":[2,16],"s":6},"H":[1,100]}"#;

#[test]
fn norm_and_pairing() {
    let o = mukai(&["norm", "--surface", "k3-elliptic", "--v", "2,(1,2),1"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "6\n".into()));
    let o = mukai(&["pair", "--surface", "k3-elliptic", "--v", "2,(1,2),1", "--u", "2,(1,2),1"]);
    assert_eq!(stdout(&o), "-2\n");
}

#[test]
fn wall_list_as_json() {
    let o = mukai(&["--format", "json", "walls", "--surface", "k3-elliptic", "--v", "2,(1,2),1"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 10);
}

#[test]
fn reduce_then_verify_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let triple = dir.path().join("triple.json");
    std::fs::write(&triple, TRIPLE).unwrap();
    let o = mukai(&["--format", "json", "reduce", "--triple", triple.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let trace: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(trace["end"]["v"], serde_json::json!({"r": 0, "c": [2], "s": 0}));

    let path = dir.path().join("trace.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let o = mukai(&["verify", "--trace", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("pass\n"));

    // Break the chain: the first move now claims a different result.
    let mut bad = trace.clone();
    bad["moves"][0]["after"]["s"] = serde_json::json!(100);
    let mut f = tempfile::NamedTempFile::new_in(dir.path()).unwrap();
    f.write_all(bad.to_string().as_bytes()).unwrap();
    let o = mukai(&["verify", "--trace", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).ends_with("fail\n"));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "verification_failed");
}

#[test]
fn thresholds_from_flags_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"threshold_a": 30}"#).unwrap();
    let o = mukai(&["--format", "json", "reduce", "--triple", TRIPLE, "--config", cfg.to_str().unwrap()]);
    let trace: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(trace["config"]["threshold_a"], 30);
    let o = mukai(&["--format", "json", "reduce", "--triple", TRIPLE, "--config", cfg.to_str().unwrap(), "--threshold-a", "40"]);
    let trace: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(trace["config"]["threshold_a"], 40);

    std::fs::write(&cfg, r#"{"threshold": 30}"#).unwrap();
    let o = mukai(&["reduce", "--triple", TRIPLE, "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invalid_triple_lists_violations() {
    // w = (2, 0, -2) is not primitive and has w² = 8.
    let t = r#"{"surface":{"kind":"K3","ns":{"rank":1,"gram":[[2]]},"ample":[1]},"v":{"r":4,"c":[0],"s":-4},"H":[1]}"#;
    let o = mukai(&["reduce", "--triple", t]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "invalid_ols_triple");
    assert_eq!(err["violations"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(mukai(&["norm"]).status.code(), Some(2));
    assert_eq!(mukai(&["--format", "csv", "b2", "--kind", "k3"]).status.code(), Some(2));
    assert_eq!(mukai(&["b2", "--kind", "k3"]).stdout, b"24\n");
}

#[test]
fn missing_file_is_an_io_error() {
    let o = mukai(&["verify", "--trace", "/nonexistent/trace.json"]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "io_error");
}

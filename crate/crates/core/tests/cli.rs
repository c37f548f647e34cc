use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_pfafflab");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env("PFAFFLAB_THREADS", "2").output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_default_suite() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = run(&["verify", "--report", path(&report)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let reps = json["reports"].as_array().unwrap();
    assert!(reps.iter().any(|r| r["params"]["check"] == "pf-squared"));
    assert!(reps.iter().any(|r| r["params"]["check"] == "pfaffian-identity"));
    assert_eq!(json["summary"]["fail"], 0);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let out = run(&["verify", "--suite", "miwa,recurrences", "--mode", "concrete", "--max-index", "3", "--seed", "11", "--report", path(p)]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let report = dir.path().join("r.json");
    let out = run(&["verify", "--instance", path(&bad), "--report", path(&report)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    assert_eq!(run(&["verify", "--suite", "nosuch", "--report", path(&report)]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--max-index", "10", "--report", path(&report)]).status.code(), Some(2));
}

#[test]
fn explicit_instance_file() {
    let dir = tempfile::tempdir().unwrap();
    let template = dir.path().join("t.json");
    std::fs::write(&template, r#"{"mode":"concrete","node_count":7,"kernel":"random","bounds":[7,7]}"#).unwrap();
    let inst = dir.path().join("i.json");
    assert_eq!(run(&["gen-instance", "--template", path(&template), "--seed", "5", "--out", path(&inst)]).status.code(), Some(0));
    let report = dir.path().join("r.json");
    let out = run(&["verify", "--suite", "orthogonality", "--max-index", "3", "--instance", path(&inst), "--report", path(&report)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn gen_instance_templates() {
    let dir = tempfile::tempdir().unwrap();
    let template = dir.path().join("t.json");
    std::fs::write(&template, r#"{"mode":"concrete","node_count":4,"kernel":"sign","bounds":[5,5]}"#).unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        assert_eq!(run(&["gen-instance", "--template", path(&template), "--seed", "7", "--out", path(p)]).status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let m = &json["kernel"]["matrix"];
    for i in 0..4 {
        for j in 0..4 {
            let expect = match i.cmp(&j) {
                std::cmp::Ordering::Less => "1",
                std::cmp::Ordering::Equal => "0",
                std::cmp::Ordering::Greater => "-1",
            };
            assert_eq!(m[i][j], expect);
        }
    }

    std::fs::write(&template, r#"{"mode":"generic","bounds":[6,6]}"#).unwrap();
    assert_eq!(run(&["gen-instance", "--template", path(&template), "--out", path(&a)]).status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["bounds", "mode"]);
    assert_eq!(json["mode"], "generic");
}

#[test]
fn explain_equations() {
    let out = run(&["explain", "pfafftoda1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("D_{t1} τ(v1,v2−1)·τ(v1,v2+1)"));
    let out = run(&["explain", "dkp"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("24 τ_{2n−2}τ_{2n+2}"));
    let out = run(&["explain", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown equation"));
}

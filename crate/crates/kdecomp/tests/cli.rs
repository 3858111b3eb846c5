use std::path::Path;
use std::process::{Command, Output};

use kdecomp::{BatchReport, Report};

fn kdecomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdecomp")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn run_json(text: &str) -> (i32, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "i.json", text);
    let out = kdecomp(&["run", &f]);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn decompose_example() {
    let (code, out, _) = run_json(r#"{"kind": "decompose", "group": [2, 2]}"#);
    assert_eq!(code, 0);
    let r = Report::from_json(&out).unwrap();
    assert_eq!(r.details["quotients"].as_array().unwrap().len(), 4);
    assert!(r.verdicts.values().all(|v| v.pass));
}

#[test]
fn classify_example() {
    let (code, out, _) = run_json(r#"{"kind": "classify-gln", "n": 2, "s": 3}"#);
    assert_eq!(code, 0);
    let r = Report::from_json(&out).unwrap();
    let classes = r.details["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 3);
    assert!(classes.iter().all(|c| c.get("centralizer_blocks").is_some() && c.get("weyl").is_some()));
}

#[test]
fn gset_example() {
    let (code, out, _) = run_json(r#"{"kind": "verify-gset", "group": [2], "orbits": [[], [0]]}"#);
    assert_eq!(code, 0);
    let r = Report::from_json(&out).unwrap();
    assert_eq!(r.ring, "Z[1/2]");
    for k in ["rank_identity", "unit_determinant", "ring_homomorphism", "r_linearity"] {
        assert!(r.verdicts[k].pass, "{k}");
    }
}

#[test]
fn unknown_key_is_bad_input() {
    let (code, out, err) = run_json(r#"{"kind": "decompose", "group": [2], "extra": true}"#);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("/extra"), "{err}");
}

#[test]
fn failing_check_exits_one() {
    let (code, out, _) = run_json(r#"{"kind": "lambda-unit", "s": 4, "weights": {"0": 1, "1": 1}}"#);
    assert_eq!(code, 1);
    let r = Report::from_json(&out).unwrap();
    assert!(r.verdicts["no_fixed_weight"].witness.is_some());
}

#[test]
fn markdown_output() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "i.json", r#"{"kind": "decompose", "group": [3]}"#);
    let out = kdecomp(&["--emit", "markdown", "run", &f]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| counting_identity | pass |"), "{text}");
}

#[test]
fn lambda_override_flag() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "i.json", r#"{"kind": "verify-gset", "group": [2], "orbits": [[]]}"#);
    let out = kdecomp(&["--lambda-override", "6", "run", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap().ring, "Z[1/6]");
    let out = kdecomp(&["--lambda-override", "3", "run", &f]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn batch_of_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = kdecomp(&["batch", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let agg: BatchReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(agg.entries.is_empty());
    let out = kdecomp(&["batch"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn batch_of_passing_instances() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "b.json", r#"{"kind": "decompose", "group": [2, 2]}"#);
    write(dir.path(), "a.json", r#"{"kind": "lambda-unit", "s": 3, "weights": [0, 1, 1]}"#);
    let out = kdecomp(&["--jobs", "2", "batch", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let agg: BatchReport = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<_> = agg.entries.iter().map(|e| e.name.as_str()).collect();
    assert_eq!(names, ["a.json", "b.json"]);
}

#[test]
fn batch_marks_the_failure() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", r#"{"kind": "decompose", "group": [2]}"#);
    let bad = write(dir.path(), "bad.json", r#"{"kind": "lambda-unit", "s": 2, "weights": [1, 1]}"#);
    let out = kdecomp(&["batch", &good, &bad]);
    assert_eq!(out.status.code(), Some(1));
    let agg: BatchReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(agg.exit_code, 1);
    let failing: Vec<_> = agg.entries.iter().filter(|e| e.exit_code != 0).map(|e| e.name.as_str()).collect();
    assert_eq!(failing, ["bad.json"]);
}

#[test]
fn batch_propagates_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", r#"{"kind": "decompose", "group": [2]}"#);
    let bad = write(dir.path(), "bad.json", r#"{"kind": "decompose", "group": [2, 3]}"#);
    let out = kdecomp(&["batch", &good, &bad]);
    assert_eq!(out.status.code(), Some(2));
    let agg: BatchReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(agg.entries[0].error.as_deref().unwrap().starts_with("/group"));
}

#[test]
fn shipped_instances_pass() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/instances");
    let out = kdecomp(&["--jobs", "4", "batch", dir]);
    let agg: BatchReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(agg.entries.len() >= 6);
    for e in &agg.entries {
        assert_eq!(e.exit_code, 0, "{}: {:?}", e.name, e.report.as_ref().map(|r| &r.verdicts));
    }
    assert_eq!(out.status.code(), Some(0));
}

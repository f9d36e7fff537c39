use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn thv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thv"))
        .args(args)
        .output()
        .expect("run thv")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn bracket_text_and_json() {
    let out = thv(&["bracket", "L[2]", "L[-2]", "--output", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("4*L[0] + 1/2*C_L"));

    let out = thv(&["bracket", "L[1]", "I[-1]", "--sign", "paper"]);
    let v = json(&out);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["sign"], "paper");
    assert_eq!(v["command"][0], "bracket");

    let out = thv(&[
        "bracket",
        "-3/2*L[-1] + I[0] - C_I",
        "-L[1]",
        "--output",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "-3*L[0]");
}

#[test]
fn parse_errors_exit_two() {
    let out = thv(&["bracket", "L[2", "L[1]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("left operand"));
    assert_eq!(thv(&["jacobi", "--max-degree", "0"]).status.code(), Some(2));
}

#[test]
fn audit_reports_expected_pattern() {
    let out = thv(&["audit", "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("4*C_LI"), "{text}");
}

#[test]
fn verify_exit_codes() {
    let verify = |a: &str, s: &str, w: &str| {
        thv(&[
            "two-local",
            "verify",
            "--assignment",
            &fixture(a),
            "--samples",
            &fixture(s),
            "--window",
            w,
        ])
    };
    let ok = verify("certified.json", "certified.samples.txt", "6");
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    assert_eq!(v["status"], "ok");

    assert_eq!(
        verify("scaled.json", "scaled.samples.txt", "4")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        verify("nonadditive.json", "nonadditive.samples.txt", "4")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        verify("far_witness.json", "empty.samples.txt", "2")
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        verify("far_witness.json", "empty.samples.txt", "0")
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        verify("malformed.json", "empty.samples.txt", "2")
            .status
            .code(),
        Some(2)
    );
    // The certified fixture lacks keys beyond its window.
    assert_eq!(
        verify("certified.json", "certified.samples.txt", "7")
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn decompose_respects_sign_override() {
    let table = fixture("table_d2.json");
    assert_eq!(
        thv(&["decompose", "--table", &table]).status.code(),
        Some(0)
    );
    assert_eq!(
        thv(&["decompose", "--table", &table, "--sign", "paper"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn decompose_tiny_and_malformed_tables() {
    let dir = tempfile::tempdir().unwrap();

    // Window 0 closes under the bracket, so the zero table decomposes to zero.
    let tiny = dir.path().join("tiny.json");
    fs::write(
        &tiny,
        r#"{"window": 0, "images": [
            {"basis": "L[0]", "image": "0"}, {"basis": "I[0]", "image": "0"},
            {"basis": "C_L", "image": "0"}, {"basis": "C_LI", "image": "0"}, {"basis": "C_I", "image": "0"}]}"#,
    )
    .unwrap();
    let out = thv(&["decompose", "--table", tiny.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["payload"]["params"]["alpha"], "0");

    let bad_sign = dir.path().join("bad.json");
    fs::write(
        &bad_sign,
        r#"{"window": 1, "sign": "upside-down", "images": []}"#,
    )
    .unwrap();
    assert_eq!(
        thv(&["decompose", "--table", bad_sign.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn lemmas_window_contract() {
    let out = thv(&["two-local", "lemmas", "--window", "4", "--output", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        thv(&["two-local", "lemmas", "--window", "2"]).status.code(),
        Some(3)
    );
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "two-local",
        "verify",
        "--assignment",
        &fixture("scaled.json"),
        "--samples",
        &fixture("scaled.samples.txt"),
        "--window",
        "4",
    ];
    let a = thv(&args);
    let b = thv(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["status"], "refuted");
}

//! End-to-end tests for the command-line binary: golden outputs,
//! byte-for-byte determinism, and the exit-code contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests");
    p.push("fixtures");
    p.push(name);
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finsite"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn site_validation_passes_on_a_good_site() {
    let out = run(&["site-validate", "--site", &fixture("pseudocircle.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("valid"));
}

#[test]
fn hypercohomology_table_matches_the_golden_output() {
    let args = [
        "hypercoh",
        "--site",
        &fixture("pseudocircle.json"),
        "--complex",
        &fixture("zcst.json"),
        "--object",
        "X",
        "--range",
        "0..2",
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let expected = "\
n  godement  cech-colimit  agree
0  Z         Z             true
1  Z         Z             true
2  0         0             true
";
    assert_eq!(text, expected);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "hypercoh",
        "--site",
        &fixture("pseudocircle.json"),
        "--complex",
        &fixture("zcst.json"),
        "--object",
        "X",
        "--window",
        "0..2",
        "--format",
        "json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn json_output_is_canonical() {
    let out = run(&[
        "homology",
        "--site",
        &fixture("pseudocircle.json"),
        "--complex",
        &fixture("zcst.json"),
        "--window",
        "0..0",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    // Objects serialize with sorted keys, so re-serializing reproduces
    // the bytes exactly.
    let mut canonical = serde_json::to_string_pretty(&value).unwrap();
    canonical.push('\n');
    assert_eq!(text, canonical);
}

#[test]
fn refined_descent_fails_with_exit_code_one() {
    let out = run(&[
        "descent",
        "--site",
        &fixture("pseudocircle.json"),
        "--complex",
        &fixture("zcst.json"),
        "--object",
        "X",
        "--levels",
        "2",
        "--depth",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("false"));
}

#[test]
fn plain_descent_passes_with_exit_code_zero() {
    let out = run(&[
        "descent",
        "--site",
        &fixture("pseudocircle.json"),
        "--complex",
        &fixture("zcst.json"),
        "--object",
        "X",
        "--levels",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn schema_violations_exit_with_code_two_and_name_the_field() {
    let dir = std::env::temp_dir().join("finsite-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad-site.json");
    std::fs::write(&bad, r#"{"objects": ["X"], "bogus": 1}"#).unwrap();
    let out = run(&["site-validate", "--site", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bogus"), "stderr names the field: {err}");
}

#[test]
fn missing_file_exits_with_code_two() {
    let out = run(&[
        "homology",
        "--site",
        &fixture("pseudocircle.json"),
        "--complex",
        "/nonexistent-complex.json",
        "--window",
        "0..1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("/nonexistent-complex.json"));
}

#[test]
fn unknown_ring_exits_with_code_two() {
    let out = run(&[
        "homology",
        "--site",
        &fixture("pseudocircle.json"),
        "--complex",
        &fixture("zcst.json"),
        "--ring",
        "R",
        "--window",
        "0..0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kan_extension_recovers_the_diagram_value() {
    for object in ["U", "V"] {
        let out = run(&[
            "kan",
            "--site",
            &fixture("arrow.json"),
            "--diagram",
            &fixture("diagram.json"),
            "--object",
            object,
        ]);
        assert_eq!(out.status.code(), Some(0), "object {object}");
    }
}

#[test]
fn mod_two_hypercohomology_uses_the_prime_flag() {
    let out = run(&[
        "hypercoh",
        "--site",
        &fixture("pseudocircle.json"),
        "--complex",
        &fixture("zcst.json"),
        "--ring",
        "Fp",
        "--p",
        "2",
        "--object",
        "X",
        "--window",
        "0..1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("F_2"), "table shows mod-2 values: {text}");
}

#[test]
fn self_checks_pass_for_a_fixed_seed() {
    let out = run(&["check", "--seed", "7", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value =
        serde_json::from_slice(&out.stdout).unwrap();
    for (suite, verdict) in value["suites"].as_object().unwrap() {
        assert_eq!(verdict, &serde_json::Value::Bool(true), "suite {suite}");
    }
}

use std::path::PathBuf;
use std::process::Command;

use hyperdescent::cli::{run, Outcome, EXIT_HYPOTHESIS, EXIT_INVALID, EXIT_OK};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name).display().to_string()
}

fn hd(args: &[&str]) -> Outcome {
    run(std::iter::once("hyperdescent").chain(args.iter().copied()))
}

fn json(o: &Outcome) -> serde_json::Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

#[test]
fn localized_descent_for_z2() {
    let z2 = corpus("z2.json");
    let o = hd(&["descent", "--input", &z2, "--mode", "ldh:3", "--ring", "int-local:3", "--truncation", "4"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["theorem_applies"], true);
    assert_eq!(v["verdict"]["kind"], "quasi-iso");
    assert_eq!(v["window"], 3);
}

#[test]
fn integral_descent_for_z2_fails_at_degree_one() {
    let z2 = corpus("z2.json");
    let args = ["descent", "--input", &z2, "--mode", "cdh", "--ring", "int", "--truncation", "4"];
    let o = hd(&args);
    assert_eq!(o.code, EXIT_OK);
    let v = json(&o);
    assert_eq!(v["theorem_applies"], false);
    assert_eq!(v["verdict"]["kind"], "failure");
    assert_eq!(v["verdict"]["degree"], 1);
    assert_eq!(v["table"][1]["source"]["torsion"], serde_json::json!([2]));
    assert_eq!(v["table"][3]["source"]["torsion"], serde_json::json!([2]));

    let strict = hd(&[&args[..], &["--strict"]].concat());
    assert_eq!(strict.code, EXIT_HYPOTHESIS);

    let tsv = hd(&[&args[..], &["--format", "tsv"]].concat());
    let rows: Vec<&str> = tsv.stdout.lines().collect();
    assert_eq!(rows[0], "degree\tsource_rank\tsource_torsion\ttarget_rank\ttarget_torsion\tcone_rank\tcone_torsion");
    assert_eq!(rows[2], "1\t0\t2\t0\t-\t0\t-");
}

#[test]
fn z3_needs_two_inverted() {
    let z3 = corpus("z3.json");
    let o = hd(&["descent", "--input", &z3, "--ring", "int-local:2"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(json(&o)["verdict"]["kind"], "quasi-iso");
    let o = hd(&["descent", "--input", &z3, "--ring", "int"]);
    assert_eq!(json(&o)["verdict"]["degree"], 1);
}

#[test]
fn coskeleton_with_oracle() {
    let o = hd(&["cosk", "--input", &corpus("random.json"), "--n", "1", "--upto", "3", "--format", "tsv"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.lines().any(|l| l == "oracle agreement: true"), "{}", o.stdout);
    let o = hd(&["cosk", "--input", &corpus("random.json"), "--n", "1", "--upto", "3"]);
    assert_eq!(json(&o)["level_sizes"].as_array().unwrap().len(), 4);
}

#[test]
fn the_remaining_commands_succeed() {
    let cases: [&[&str]; 6] = [
        &["validate", "--input", "split-surjection.json"],
        &["nerve", "--input", "split-surjection.json", "--name", "projection"],
        &["hypercover", "--input", "random.json"],
        &["tower", "--input", "z2.json"],
        &["homology", "--input", "split-surjection.json", "--format", "tsv"],
        &["ss", "--input", "random.json", "--ring", "fp:2"],
    ];
    for case in cases {
        let mut args: Vec<String> = case.iter().map(|s| s.to_string()).collect();
        args[2] = corpus(case[2]);
        let o = run(std::iter::once("hyperdescent".to_string()).chain(args));
        assert_eq!(o.code, EXIT_OK, "{case:?}: {}", o.stderr);
        assert!(!o.stdout.is_empty());
    }
}

#[test]
fn nerve_output_is_a_simplicial_entry() {
    let o = hd(&["nerve", "--input", &corpus("split-surjection.json"), "--name", "projection", "--truncation", "3"]);
    let v = json(&o);
    let committed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(corpus("split-surjection.json")).unwrap()).unwrap();
    assert_eq!(v["simplicial"], committed["simplicial"]["nerve"]);
}

#[test]
fn invalid_input_exits_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    for text in [
        "{",
        r#"{"format": 2}"#,
        r#"{"format": 1, "unknown": 0}"#,
        r#"{"format": 1, "objects": {"a": {"size": 2}}, "morphisms": {"f": {"source": "a", "target": "b", "values": [0, 0]}}}"#,
        r#"{"format": 1, "objects": {"a": {"size": 2}, "b": {"size": 1}}, "morphisms": {"f": {"source": "a", "target": "b", "values": [0, 1]}}}"#,
    ] {
        std::fs::write(&bad, text).unwrap();
        let o = hd(&["validate", "--input", bad.to_str().unwrap()]);
        assert_eq!(o.code, EXIT_INVALID, "{text}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(hd(&["validate", "--input", "/nonexistent/file.json"]).code, EXIT_INVALID);
    assert_eq!(hd(&["frobnicate"]).code, EXIT_INVALID);
    assert_eq!(hd(&["descent", "--input", &corpus("z2.json"), "--bogus"]).code, EXIT_INVALID);
    assert_eq!(hd(&["descent", "--input", &corpus("z2.json"), "--ring", "int-local:4"]).code, EXIT_INVALID);
    assert_eq!(hd(&["descent", "--input", &corpus("z2.json"), "--truncation", "9"]).code, EXIT_INVALID);
    assert_eq!(hd(&["ss", "--input", &corpus("z2.json"), "--ring", "int"]).code, EXIT_INVALID);
}

#[test]
fn suite_reports_each_criterion() {
    let o = hd(&["suite", "--seed", "3", "--criterion", "4", "--criterion", "7", "--count", "3"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    let v = json(&o);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
    assert_eq!(hd(&["suite", "--criterion", "12"]).code, EXIT_INVALID);
}

#[test]
fn the_binary_uses_the_same_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hyperdescent");
    let z2 = corpus("z2.json");
    let out = Command::new(bin).args(["descent", "--input", &z2, "--ring", "int-local:3", "--strict"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let out = Command::new(bin).args(["descent", "--input", &z2, "--ring", "int", "--mode", "cdh", "--strict"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_HYPOTHESIS));
    let out = Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INVALID));
    assert!(!out.stderr.is_empty());
}

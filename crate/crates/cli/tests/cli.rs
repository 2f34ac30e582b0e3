//! End-to-end tests of the command-line interface against the shipped
//! system files, pinning exit codes and report fragments.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rewrite"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn testdata(name: &str) -> String {
    format!("{}/testdata/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn check_passes_on_both_published_strategies() {
    for file in ["four_cycle_strategy1.json", "four_cycle_strategy2.json"] {
        let out = run(&["check", &testdata(file)]);
        assert_eq!(out.status.code(), Some(0), "{file}");
        let text = stdout(&out);
        assert!(text.contains("TG4"));
        assert!(text.contains("result: pass"));
    }
}

#[test]
fn check_reports_unit_violation_with_witness() {
    let out = run(&["check", &testdata("bad_unit_choice.json")]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("TG3"));
    assert!(text.contains("stage 0: c"));
}

#[test]
fn check_rejects_decimal_rationals() {
    let out = run(&["check", &testdata("malformed_rational.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0.5"));
}

#[test]
fn check_rejects_missing_files() {
    let out = run(&["check", "/nonexistent/system.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn normalize_polynomial_to_zero() {
    let out = run(&[
        "normalize",
        &testdata("complex_degree8.json"),
        "x^3+x^2+x+1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("strategy normal form: 0"));
    assert!(text.contains("agreement: yes"));
}

#[test]
fn normalize_normal_form_is_fixed() {
    let out = run(&["normalize", &testdata("four_cycle_strategy1.json"), "c"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("strategy normal form: c"));
}

#[test]
fn normalize_depends_on_the_strategy() {
    let out = run(&["normalize", &testdata("four_cycle_strategy2.json"), "a"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("strategy normal form: d"));
    let out = run(&["normalize", &testdata("four_cycle_strategy1.json"), "a"]);
    assert!(stdout(&out).contains("strategy normal form: c"));
}

#[test]
fn newman_certifies_the_diamond() {
    let out = run(&["newman", &testdata("diamond.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("quotient size:   1"));
    assert!(text.contains("certified: yes"));
}

#[test]
fn newman_exhausts_on_the_cycle() {
    let out = run(&["newman", &testdata("four_cycle_strategy1.json")]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("f1") || err.contains("f2"), "{err}");
}

#[test]
fn newman_certifies_the_complex_system() {
    let out = run(&["newman", &testdata("complex_degree8.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("quotient size:   2"));
    assert!(text.contains("normal forms:    2"));
    assert!(text.contains("canonical map is isomorphism: yes"));
}

#[test]
fn quotient_reports_the_collapse() {
    let out = run(&["quotient", &testdata("four_cycle_strategy1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("quotient size: 1"));
    assert!(text.contains("normal forms:  2"));
    assert!(text.contains("canonical map is isomorphism: no"));
}

#[test]
fn chain_system_round_trip() {
    let out = run(&["check", &testdata("chain.json")]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["normalize", &testdata("chain.json"), "a"]);
    assert!(stdout(&out).contains("strategy normal form: c"));
    let out = run(&["newman", &testdata("chain.json")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn suite_is_deterministic_and_passes() {
    let args = [
        "suite",
        "--kind",
        "all",
        "--seed",
        "11",
        "--count",
        "12",
        "--json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "reports must be byte-identical");
    let text = stdout(&first);
    assert!(text.contains("\"passed\": true"));
}

#[test]
fn suite_with_zero_count_is_empty_and_passes() {
    let out = run(&["suite", "--count", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("result: pass"));
}

#[test]
fn json_reports_have_stable_shape() {
    let out = run(&["check", &testdata("chain.json"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["command"], "check");
    assert_eq!(parsed["passed"], true);
    let again = run(&["check", &testdata("chain.json"), "--json"]);
    assert_eq!(out.stdout, again.stdout);
}

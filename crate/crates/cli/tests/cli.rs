use std::path::Path;

use serde_json::{json, Value};

use dgw_cli::{run_suite, run_to, Suite, SuiteConfig};

fn dgw(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv: Vec<&str> = std::iter::once("dgw").chain(args.iter().copied()).collect();
    let code = run_to(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(dgw(&["--help"]).0, 0);
    assert_eq!(dgw(&["--version"]).0, 0);
    assert!(dgw(&["wfs", "--help"]).1.contains("--seed"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dgw(&[]).0, 2);
    assert_eq!(dgw(&["frobnicate"]).0, 2);
    assert_eq!(dgw(&["wfs", "--bogus"]).0, 2);
    assert_eq!(dgw(&["wfs", "--ring", "F4"]).0, 2);
    assert_eq!(dgw(&["wfs", "--check", "nope"]).0, 2);
    assert_eq!(dgw(&["counterexample", "--m", "3"]).0, 2);
    let (code, _, err) = dgw(&["reedy", "--ring", "Z"]);
    assert_eq!(code, 2);
    assert!(err.contains("field"), "{err}");
}

#[test]
fn passing_suite_exits_zero_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, stdout, _) = dgw(&["wfs", "--check", "factorization", "--cases", "5", "--ring", "F2", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("wall time"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["suite"], "wfs");
    assert_eq!(v["cases"].as_array().unwrap().len(), 5);
    assert!(v.to_string().find("wall").is_none());
}

#[test]
fn failing_suite_exits_one() {
    let (code, stdout, _) = dgw(&["counterexample", "--ring", "F3"]);
    assert_eq!(code, 1, "{stdout}");
    let (code, _, _) = dgw(&["counterexample", "--ring", "F5", "--m", "4"]);
    assert!(code == 0 || code == 1);
}

#[test]
fn validate_reports_the_bad_degree() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"ring": "F3", "lo": 0, "hi": 2, "rank": {"0": 1, "1": 1, "2": 1}, "d": {"1": [["1"]], "2": [["1"]]}}"#);
    let (code, _, err) = dgw(&["validate", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("degree 2"), "{err}");

    let ok = write(dir.path(), "ok.json", r#"{"ring": "F3", "lo": 0, "hi": 1, "rank": {"0": 1, "1": 1}, "d": {"1": [["1"]]}}"#);
    let (code, out, _) = dgw(&["validate", &ok]);
    assert_eq!(code, 0);
    assert!(out.contains("chain complex"));
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "broken.json", "{\"ring\": \"F3\",\n \"lo\": 0,, }");
    let (code, _, err) = dgw(&["validate", &p]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2") && err.contains("column 10"), "{err}");
    assert_eq!(dgw(&["validate", "/nonexistent/x.json"]).0, 2);
}

#[test]
fn unrecognized_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "x.json", r#"{"hello": 1}"#);
    assert_eq!(dgw(&["validate", &p]).0, 2);
}

#[test]
fn homology_over_z_reports_torsion() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "c.json", r#"{"ring": "Z", "lo": 0, "hi": 1, "rank": {"0": 1, "1": 1}, "d": {"1": [["2"]]}}"#);
    let (code, out, _) = dgw(&["homology", &p]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["homology"]["0"], json!({"free_rank": 0, "torsion": ["2"]}));
    assert_eq!(v["homology"]["1"], json!({"free_rank": 0, "torsion": []}));
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let code = dgw(&["wfs", "--check", "factorization,lifting", "--cases", "30", "--seed", "7", "--out", p.to_str().unwrap()]).0;
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn different_seeds_differ() {
    let run = |seed| {
        let mut c = SuiteConfig::defaults(Suite::Wfs);
        c.checks = vec!["factorization".into()];
        c.cases = Some(5);
        c.seed = seed;
        run_suite(&c).unwrap().to_bytes()
    };
    assert_ne!(run(1), run(2));
}

#[test]
fn thread_count_does_not_change_the_report() {
    for suite in [Suite::Wfs, Suite::Reedy, Suite::Distlaw] {
        let mut c = SuiteConfig::defaults(suite);
        c.cases = Some(6);
        c.seed = 11;
        c.threads = Some(1);
        let one = run_suite(&c).unwrap().to_bytes();
        c.threads = Some(3);
        assert_eq!(one, run_suite(&c).unwrap().to_bytes(), "{}", suite.name());
    }
}

#[test]
fn case_digests_are_stable_hex() {
    let mut c = SuiteConfig::defaults(Suite::Counterexample);
    c.rings = vec![dgw::exactlin::Ring::fp(5)];
    let r = run_suite(&c).unwrap();
    assert_eq!(r.cases.len(), 5);
    for k in &r.cases {
        assert_eq!(k.digest.len(), 16);
        assert!(k.digest.chars().all(|ch| ch.is_ascii_hexdigit()));
    }
}

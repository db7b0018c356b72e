//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Runs without the test harness so the lines always reach stdout. The
//! process fails if a criterion's outcome differs from the recorded one:
//! every criterion must pass except 7, whose failure is pinned to the
//! analysed vanishing of the obstruction (see README).

use std::time::Instant;

use serde_json::{json, Value};

use dgw::exactlin::Ring;
use dgw_cli::{run_suite, Report, Suite, SuiteConfig};

struct Outcome {
    pass: bool,
    note: String,
}

fn cfg(suite: Suite, checks: &[&str], rings: &[u64]) -> SuiteConfig {
    let mut c = SuiteConfig::defaults(suite);
    if !checks.is_empty() {
        c.checks = checks.iter().map(|s| s.to_string()).collect();
    }
    if !rings.is_empty() {
        c.rings = rings.iter().map(|&p| if p == 0 { Ring::Q } else { Ring::fp(p) }).collect();
    }
    c
}

fn timed(c: &SuiteConfig) -> (Report, f64) {
    let t = Instant::now();
    let r = run_suite(c).expect("suite runs");
    (r, t.elapsed().as_secs_f64())
}

fn count(r: &Report, section: &str) -> (usize, usize) {
    r.sections().get(section).copied().unwrap_or((0, 0))
}

fn sections_note(r: &Report) -> String {
    r.sections().iter().map(|(s, (p, n))| format!("{s} {p}/{n}")).collect::<Vec<_>>().join(", ")
}

fn c1() -> Outcome {
    let c = cfg(Suite::Wfs, &["factorization", "functoriality"], &[2, 3, 5]);
    let (r, secs) = timed(&c);
    let (fp, fnum) = count(&r, "factorization");
    let (gp, gn) = count(&r, "functoriality");
    let pass = r.pass() && fnum == 1500 && fp == fnum && gn >= 200 && gp == gn && secs < 60.0;
    Outcome { pass, note: format!("{}; {secs:.1} s", sections_note(&r)) }
}

fn c2() -> Outcome {
    let (r, secs) = timed(&cfg(Suite::Wfs, &["lifting"], &[]));
    let want = [("lifting-solvable", 200), ("lifting-unsolvable", 20), ("lifting-brute-force", 10)];
    let pass = r.pass() && want.iter().all(|&(s, n)| count(&r, s) == (n, n));
    Outcome { pass, note: format!("{}; {secs:.1} s", sections_note(&r)) }
}

fn c3() -> Outcome {
    let (r, secs) = timed(&cfg(Suite::Wfs, &["two-of-six"], &[]));
    let pass = r.pass() && count(&r, "two-of-six") == (100, 100);
    Outcome { pass, note: format!("{}; {secs:.1} s", sections_note(&r)) }
}

fn c4() -> Outcome {
    let (r, secs) = timed(&cfg(Suite::Wfs, &["kunneth"], &[5]));
    let pass = r.pass() && count(&r, "kunneth") == (100, 100);
    Outcome { pass, note: format!("{}; {secs:.1} s", sections_note(&r)) }
}

fn c5() -> Outcome {
    let mut c = cfg(Suite::Barcobar, &["bar-cobar"], &[]);
    c.max_weight = 6;
    let (r, secs) = timed(&c);
    let alg = r.cases.iter().filter(|k| k.id.starts_with("bar-cobar/algebra-") && k.pass).count();
    let coalg = r.cases.iter().filter(|k| k.id.starts_with("bar-cobar/coalgebra-") && k.pass).count();
    let pass = r.pass() && alg >= 10 && coalg >= 10 && secs < 120.0;
    Outcome { pass, note: format!("{alg} algebras, {coalg} coalgebras; {secs:.1} s") }
}

fn c6() -> Outcome {
    let (r, secs) = timed(&cfg(Suite::Distlaw, &[], &[]));
    let mutations: std::collections::BTreeSet<&str> = r
        .cases
        .iter()
        .filter(|k| k.section() == "mutation" && k.pass)
        .filter_map(|k| k.id.strip_prefix("mutation/").and_then(|s| s.rsplit_once('/')).map(|(m, _)| m))
        .collect();
    let shapes = ["Δ≤1/", "Δ≤2/"].iter().all(|s| r.cases.iter().any(|k| k.id.starts_with(&format!("reedy-chi/{s}")) && k.pass));
    let pass = r.pass() && count(&r, "tensor").1 >= 20 && mutations.len() == 8 && shapes;
    Outcome { pass, note: format!("{}; {} mutations detected; {secs:.1} s", sections_note(&r), mutations.len()) }
}

fn sweep(r: &Report, a: &str) -> Value {
    r.cases.iter().find(|k| k.id == format!("sweep/a={a}")).map(|k| k.witness.clone()).unwrap_or(Value::Null)
}

/// Returns the outcome and whether the failure is exactly the analysed one.
fn c7() -> (Outcome, bool) {
    let mut sink = Vec::new();
    let code = dgw_cli::run_to(["dgw", "counterexample", "--ring", "F3", "--m", "2"], &mut sink, &mut Vec::new());
    let f3 = run_suite(&cfg(Suite::Counterexample, &[], &[3])).expect("suite runs");
    let vanishing: Vec<&str> = f3.failures().iter().map(|k| k.id.as_str()).collect();
    let i = code == 0 && f3.pass();

    let q = run_suite(&cfg(Suite::Counterexample, &[], &[0])).expect("suite runs");
    let at0 = sweep(&q, "0");
    let ii = at0["display_difference"] == json!({"x|x ⊗ x|x": "2"});

    let f2 = run_suite(&cfg(Suite::Counterexample, &[], &[2])).expect("suite runs");
    let iii = f2.cases.iter().all(|k| k.witness["display_difference"] == json!({}));

    let expected = code == 1 && vanishing == ["sweep/a=1", "sweep/a=2"] && ii && iii && q.details["roots"] == json!(["1"]);
    let note = format!(
        "(i) {} exit {code}, vanishes at {}; (ii) {}; (iii) {}",
        if i { "PASS" } else { "FAIL" },
        vanishing.iter().map(|s| s.trim_start_matches("sweep/")).collect::<Vec<_>>().join(" "),
        if ii { "PASS" } else { "FAIL" },
        if iii { "PASS" } else { "FAIL" },
    );
    (Outcome { pass: i && ii && iii, note }, expected)
}

fn c8() -> Outcome {
    let (r, secs) = timed(&cfg(Suite::Reedy, &[], &[3]));
    let pass = r.pass()
        && count(&r, "simplicial").0 >= 50
        && count(&r, "exact-square").0 >= 50
        && count(&r, "exact-square-dual").0 >= 50
        && count(&r, "golden") == (4, 4);
    Outcome { pass, note: format!("{}; {secs:.1} s", sections_note(&r)) }
}

fn c9() -> Outcome {
    let mut c = cfg(Suite::Barcobar, &["two-sided"], &[5]);
    c.cases = Some(5);
    let (r, secs) = timed(&c);
    let pass = r.pass() && count(&r, "two-sided") == (5, 5);
    Outcome { pass, note: format!("{}; {secs:.1} s", sections_note(&r)) }
}

fn c10() -> Outcome {
    let small = |suite: Suite, cases: usize| {
        let mut c = SuiteConfig::defaults(suite);
        c.cases = Some(cases);
        c.seed = 7;
        c
    };
    let configs = [small(Suite::Wfs, 20), small(Suite::Barcobar, 2), small(Suite::Distlaw, 3), small(Suite::Counterexample, 1), small(Suite::Reedy, 5)];
    let mut same = 0;
    for c in &configs {
        let a = run_suite(c).expect("suite runs").to_bytes();
        let b = run_suite(c).expect("suite runs").to_bytes();
        let mut c2 = c.clone();
        c2.threads = Some(if c.threads == Some(1) { 2 } else { 1 });
        let d = run_suite(&c2).expect("suite runs").to_bytes();
        same += usize::from(a == b && a == d);
    }
    Outcome { pass: same == configs.len(), note: format!("{same}/{} suites byte-identical across reruns and thread counts", configs.len()) }
}

fn main() {
    let mut unexpected = vec![];
    let mut line = |n: usize, o: &Outcome, expected_pass: bool| {
        println!("criterion {n:>2}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.note);
        if o.pass != expected_pass {
            unexpected.push(n);
        }
    };
    line(1, &c1(), true);
    line(2, &c2(), true);
    line(3, &c3(), true);
    line(4, &c4(), true);
    line(5, &c5(), true);
    line(6, &c6(), true);
    let (o7, analysed) = c7();
    line(7, &o7, false);
    line(8, &c8(), true);
    line(9, &c9(), true);
    line(10, &c10(), true);
    if !analysed {
        println!("criterion  7 failed differently from the recorded analysis");
        unexpected.push(7);
    }
    if unexpected.is_empty() {
        println!("acceptance: outcomes match the record (7 is a known failure)");
    } else {
        println!("acceptance: unexpected outcomes for {unexpected:?}");
        std::process::exit(1);
    }
}

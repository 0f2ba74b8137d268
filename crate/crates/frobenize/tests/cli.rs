//! End-to-end CLI tests: golden outputs, determinism, exit codes, and the
//! JSON/CSV surfaces.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobenize"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn analyze_golden() {
    let got = stdout_of(&[
        "analyze",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/2,1/2",
        "--beta",
        "2/3",
    ]);
    let want = "\
command: analyze
source: hypergeometric alpha=[1/2,1/2] beta=[2/3,1]
operator: D^2 + ((2*z - 2/3)/(z^2 - z))*D + ((1/4)/(z^2 - z))
order: 2
singular points: 0, 1, inf
fuchsian: yes
exponents:
  0: 0, 1/3
  1: -1/3, 0
  inf: 1/2, 1/2
rigidity: applicable=yes omegas=[2, 2, 2] sum=6 target=6 rigid=yes
";
    assert_eq!(got, want);
}

#[test]
fn analyze_operator_expression() {
    let got = stdout_of(&[
        "analyze",
        "--op",
        "D^2 + ((1-2*z)/(z*(1-z)))*D - 1/(4*z*(1-z))",
    ]);
    assert!(got.contains("singular points: 0, 1, inf"));
    assert!(got.contains("fuchsian: yes"));
    assert!(got.contains("  0: 0, 0"));
    assert!(got.contains("  inf: 1/2, 1/2"));
    assert!(got.contains("rigidity: not computed"));
    // The heuristic flag produces a clearly-labeled report.
    let got = stdout_of(&[
        "analyze",
        "--op",
        "D^2 + ((1-2*z)/(z*(1-z)))*D - 1/(4*z*(1-z))",
        "--assume-semisimple",
    ]);
    assert!(got.contains("heuristic: semisimplicity assumed"));
}

#[test]
fn analyze_trivial_operator() {
    let got = stdout_of(&["analyze", "--op", "D"]);
    assert!(got.contains("singular points: none"));
    assert!(got.contains("fuchsian: yes"));
}

#[test]
fn primes_golden_table() {
    let got = stdout_of(&[
        "primes",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/2,1/2",
        "--beta",
        "2/3",
        "--bound",
        "20",
    ]);
    assert!(got.contains("ambient set: {-1, 1, 2, 3} (shift m = 1)"));
    assert!(got.contains("uniform period (general, product of unit-group orders): 4"));
    assert!(got.contains("uniform period (family, phi(d)): 2"));
    for (p, h) in [(5, 2), (7, 1), (11, 2), (13, 1), (17, 2), (19, 1)] {
        let line = got
            .lines()
            .find(|l| l.trim_start().starts_with(&format!("{p} ")))
            .unwrap_or_else(|| panic!("no row for p = {p}"));
        assert!(line.contains("yes"), "p = {p} should be admitted: {line}");
        assert!(
            line.contains(&format!(" {h} ")),
            "h_min for p = {p}: {line}"
        );
    }
    for p in [2, 3] {
        let line = got
            .lines()
            .find(|l| l.trim_start().starts_with(&format!("{p} ")))
            .unwrap();
        assert!(line.contains("no"), "p = {p} should be excluded: {line}");
    }
}

#[test]
fn primes_csv() {
    let got = stdout_of(&[
        "primes", "--family", "order1", "--q", "(1/2)/z", "--bound", "10", "--csv",
    ]);
    let want = "\
p,in_s,h_uniform,h_min,reasons
2,false,,,\"thm1: ambient-not-unit(2); gauss-norm(entry 0)\"
3,true,1,1,\"\"
5,true,1,1,\"\"
7,true,1,1,\"\"
";
    assert_eq!(got, want);
}

#[test]
fn certify_golden() {
    let got = stdout_of(&[
        "certify",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/2",
        "--p",
        "5",
    ]);
    let want = "\
command: certify
source: hypergeometric alpha=[1/2] beta=[1]
p: 5
order n: 1
minimal period h: 1
relation: level j = 1, coefficient degree <= 2, verified to z^388
  r_0 = 4
  r_1 = z^2 + 3*z + 1
degree bound p^(j*h): 5
theorem bound p^(n^2*h): 5
refined bound p^(n*r*h): 5 (r = 1, heuristic)
";
    assert_eq!(got, want);
}

#[test]
fn certify_paper_example_with_oracle() {
    let got = stdout_of(&[
        "certify",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/2,1/2",
        "--beta",
        "2/3",
        "--p",
        "7",
        "--oracle",
    ]);
    assert!(got.contains("minimal period h: 1"));
    assert!(got.contains("theorem bound p^(n^2*h): 2401"));
    assert!(got.contains("refined bound p^(n*r*h): 49 (r = 1, heuristic)"));
    assert!(got.contains("oracle: minimal polynomial degree 6"));
}

#[test]
fn expand_reports_non_integrality() {
    let got = stdout_of(&[
        "expand",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/2,1/2",
        "--beta",
        "2/3",
        "--p",
        "5",
        "--precision",
        "6",
    ]);
    assert!(got.contains("a(2) = 81/320"));
    assert!(got.contains("not 5-integral: first offending index 2"));
}

#[test]
fn outputs_are_deterministic() {
    let args = [
        "primes",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/2,1/2",
        "--beta",
        "2/3",
        "--bound",
        "30",
        "--json",
    ];
    let first = stdout_of(&args);
    let second = stdout_of(&args);
    assert_eq!(first, second);
    let doc: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["command"], "primes");
    assert_eq!(doc["uniform_period_family_phi_d"], 2);
    let verdicts = doc["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 10); // primes up to 30
    assert_eq!(verdicts[3]["p"], 7);
    assert_eq!(verdicts[3]["in_s"], true);
    assert_eq!(verdicts[3]["h_min"], 1);
}

#[test]
fn json_certify_document() {
    let got = stdout_of(&[
        "certify",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/2",
        "--p",
        "5",
        "--json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&got).unwrap();
    assert_eq!(doc["relation"]["j"], 1);
    assert_eq!(doc["relation"]["r"][1], serde_json::json!([1, 3, 1]));
    assert_eq!(doc["theorem_bound"], "5");
}

#[test]
fn exit_codes() {
    // 2: syntax error in the operator expression.
    let out = run(&["analyze", "--op", "D^2 + )z"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("\"kind\":\"parse\""));

    // 2: mixed bases.
    let out = run(&["analyze", "--op", "D + T"]);
    assert_eq!(out.status.code(), Some(2));

    // 3: eligibility (prime not admitted).
    let out = run(&[
        "certify",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/2,1/2",
        "--beta",
        "2/3",
        "--p",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("\"kind\":\"not-in-prime-set\""));

    // 3: not Fuchsian.
    let out = run(&["primes", "--op", "D^2 - 1/z^3"]);
    assert_eq!(out.status.code(), Some(3));

    // 3: non-integral series at the requested prime (with --force past the gate).
    let out = run(&[
        "certify",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/2,1/2",
        "--beta",
        "2/3",
        "--p",
        "5",
        "--force",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("\"kind\":\"non-integral\""));

    // 4: nothing found inside user-restricted bounds.
    let out = run(&[
        "certify",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/2,1/2",
        "--beta",
        "2/3",
        "--p",
        "7",
        "--jmax",
        "1",
        "--degmax",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(4));

    // 5: red flag - theorem-range search exhausted at this precision.
    let out = run(&[
        "certify",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/2,1/2",
        "--beta",
        "2/3",
        "--p",
        "7",
        "--degmax",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(5));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("\"kind\":\"red-flag\""));

    // --csv outside prime tables is a usage error.
    let out = run(&["analyze", "--op", "D", "--csv"]);
    assert_eq!(out.status.code(), Some(3));

    // Errors always carry the machine-parseable code field.
    let out = run(&[
        "certify",
        "--family",
        "hypergeometric",
        "--alpha",
        "1/3",
        "--p",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    let line = err
        .lines()
        .find(|l| l.starts_with('{'))
        .expect("json error line");
    let doc: serde_json::Value = serde_json::from_str(line).unwrap();
    assert_eq!(doc["error"]["code"], 3);
}

#[test]
fn pochhammer_family_via_cli() {
    let got = stdout_of(&[
        "analyze",
        "--family",
        "pochhammer",
        "--a",
        "1/2",
        "--alphas",
        "0,2",
        "--bs",
        "1/3,1/5",
    ]);
    assert!(got.contains("singular points: 0, 2, inf"));
    assert!(got.contains("rigid=yes"));
    assert!(got.contains("sum=6 target=6"));
}

#[test]
fn degenerate_family_keeps_declared_singular_points() {
    // a + b = 0 cancels the singularity out of the monic coefficients; the
    // declared locus is still reported, with ordinary exponents.
    let got = stdout_of(&[
        "analyze",
        "--family",
        "pochhammer",
        "--a",
        "1/2",
        "--alphas",
        "0",
        "--bs=-1/2",
    ]);
    assert!(got.contains("operator: D"));
    assert!(got.contains("singular points: 0, inf"));
    assert!(got.contains("applicable=no"));
}

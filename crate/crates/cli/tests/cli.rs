//! End-to-end driver tests: exit codes, determinism, and the bundled
//! fixtures.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidgauge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_temp(name: &str, content: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("braidgauge-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}-{}", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(content.as_bytes()).unwrap();
    path
}

#[test]
fn verify_bundled_model_all_suites_passes() {
    let out = run(&["verify", "--model", "anyonic.model", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("galois map bijective: pass"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_individual_suites() {
    for suite in ["algebra", "hopf", "comodule", "principal", "connection"] {
        let out = run(&["verify", "--model", "anyonic.model", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "suite {suite}");
    }
}

#[test]
fn degree_violation_exits_two_with_the_line() {
    let path = write_temp(
        "bad-degree.model",
        "algebra M\n  modulus 3\n  basis 1:0 theta:1 theta2:2\n  unit 1\n  mul theta theta -> theta\n",
    );
    let out = run(&["verify", "--model", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 5"), "{err}");
    assert!(err.contains("degree violation"), "{err}");
}

#[test]
fn broken_antipode_exits_one_naming_the_axiom() {
    let text = braidgauge::fixtures::ANYONIC_MODEL.replace("antipode xi -> -xi", "antipode xi -> xi");
    let path = write_temp("bad-antipode.model", &text);
    let out = run(&["verify", "--model", path.to_str().unwrap(), "--suite", "hopf"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("antipode"), "{stdout}");
    assert!(stdout.contains("FAIL"), "{stdout}");
}

#[test]
fn unknown_suite_or_missing_file_exit_two() {
    let out = run(&["verify", "--model", "anyonic.model", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--model", "no-such-file.model"]);
    assert_eq!(out.status.code(), Some(2));
    // clap usage errors are input errors as well
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn anyonic_report_is_deterministic_and_flags_the_comodule_operator() {
    let args = [
        "report",
        "anyonic",
        "--params",
        "a1=1/2,a2=-1,b1=2,b2=1+q,c1=1,c2=-1/3,s0=1,s1=2,s2=0",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "byte-identical reruns");
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.contains("warning: operator data with beta(xi) = 0 is inconsistent"));
    assert!(text.contains("result: ok"));
}

#[test]
fn anyonic_report_computes_the_expected_curvature() {
    let out = run(&["report", "anyonic", "--params", "a1=1,s0=1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    // at a1 = 1: F(xi) = 0 and F(xi2) = (1+q) dt dt
    assert!(text.contains("F(xi) = 0"));
    assert!(text.contains(
        "F(xi2) = (1+q) 1.theta.theta + (-1-q) 1.theta2.1 + (-1-q) theta.1.theta + (1+q) theta.theta.1"
    ));
    // all-zero parameters produce zero outputs
    let out = run(&["report", "anyonic"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("A(xi) = 0"));
    assert!(text.contains("F(xi2) = 0"));
    assert!(text.contains("flat: yes"));
}

#[test]
fn flat_parameters_are_reported_flat_and_gauge_to_zero() {
    // a2 = 0, b2 = -(1+q) a1^2 with a1 = 2: b2 = -4-4q
    let out = run(&[
        "report",
        "anyonic",
        "--params",
        "a1=2,a2=0,b1=1,b2=-4-4q",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("flat: yes"));
    assert!(text.contains("every flat member gauges to the zero field (5 seeded draws): pass"));
    assert!(text.contains("canonical representative: (a1, a2, b1, b2) = (0, 0, 0, 0)"));
}

#[test]
fn composite_report_runs_and_rejects_bad_factors() {
    let out = run(&["report", "composite", "--params", "a=x,b=x"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("result: ok"));
    // graded factor: exit 2
    let path = write_temp(
        "graded-factor.model",
        "algebra N\n  modulus 3\n  basis 1:0 y:1\n  unit 1\n  mul y y -> 0\n",
    );
    let out = run(&["report", "composite", "--model", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // noncommutative factor: exit 2
    let path = write_temp(
        "noncomm-factor.model",
        "algebra N\n  modulus 3\n  basis 1:0 u:0 v:0 w:0\n  unit 1\n  mul u v -> w\n",
    );
    let out = run(&["report", "composite", "--model", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tangle_fixtures_pass_and_failures_carry_witnesses() {
    for file in ["hopf.tgl", "comodule.tgl", "yangbaxter.tgl"] {
        let out = run(&["tangle", file, "--model", "anyonic.model"]);
        assert_eq!(out.status.code(), Some(0), "file {file}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("all pass"));
    }
    // the braiding does not square to the identity; witness is xi (x) xi
    let path = write_temp(
        "psi-squared.tgl",
        "check: psi[B,B] . psi[B,B] == id[B*B]\n",
    );
    let out = run(&["tangle", path.to_str().unwrap(), "--model", "anyonic.model"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL at xi.xi"), "{text}");
    // empty files succeed
    let path = write_temp("empty.tgl", "# nothing here\n");
    let out = run(&["tangle", path.to_str().unwrap(), "--model", "anyonic.model"]);
    assert_eq!(out.status.code(), Some(0));
    // parse errors exit 2
    let path = write_temp("broken.tgl", "check: mul_B . ( == id[B]\n");
    let out = run(&["tangle", path.to_str().unwrap(), "--model", "anyonic.model"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = std::env::temp_dir().join("braidgauge-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("report-{}.txt", std::process::id()));
    let out = run(&[
        "report",
        "anyonic",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("anyonic gauge theory report"));
}

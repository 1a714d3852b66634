//! End-to-end tests of the installed binary: exit codes, file
//! products, config handling, and output formats.

use std::process::{Command, Output};

fn twistvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistvol"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn jones_prints_value_and_growth() {
    let o = twistvol(&["jones", "--p", "2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("value   = -7.00000000000000e0"), "{s}");
    assert!(s.contains("v_N     = 6.11325702881799e0"), "{s}");
}

#[test]
fn jones_color_one_is_trivial() {
    let o = twistvol(&["jones", "--p", "2", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("value   = 1.00000000000000e0 + 0.00000000000000e0 i"), "{s}");
    assert!(s.contains("v_N     = 0.00000000000000e0"), "{s}");
}

#[test]
fn excluded_twist_parameters_exit_two() {
    for p in ["0", "1", "-1"] {
        let o = twistvol(&["jones", "--p", p, "--n", "5"]);
        assert_eq!(o.status.code(), Some(2), "p = {p}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(
            err.contains(&format!("p = {p}")) && (err.contains("{0, 1}") || err.contains("|p| >= 2")),
            "message should cite the excluded parameter and the constraint: {err}"
        );
    }
    assert_eq!(twistvol(&["volume", "--p", "1"]).status.code(), Some(2));
}

#[test]
fn budget_exceeded_exits_three() {
    let o = twistvol(&["jones", "--p", "2", "--n", "300", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn volume_mirror_agrees() {
    let a = twistvol(&["volume", "--p", "2", "--format", "json"]);
    let b = twistvol(&["volume", "--p", "-2", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let va: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let vb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    assert_eq!(va["volume"], vb["volume"]);
    let vol = va["volume"].as_f64().unwrap();
    assert!((vol - 3.163963228883144).abs() < 1e-10, "{vol}");
}

#[test]
fn verify_with_config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg,
        "# small experiment\np = 2\nn_values = 10, 20, 30, 40\nseed = 5\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = twistvol(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "11",
        "--out-dir",
        out.to_str().unwrap(),
        "--format",
        "json",
    ]);
    // failing checks are expected on this family; the report is the product
    assert_eq!(o.status.code(), Some(1));
    let file = std::fs::read_to_string(out.join("report.json")).unwrap();
    assert_eq!(stdout(&o), file, "stdout json must equal the written file");
    let v: serde_json::Value = serde_json::from_str(&file).unwrap();
    assert_eq!(v["seed"], 11, "--seed must override the config file");
    assert_eq!(v["p"], 2);
    assert_eq!(v["n_values"].as_array().unwrap().len(), 4);
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(csv.starts_with("N,v_N,lower_proxy,upper_proxy\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn verify_missing_config_exits_two() {
    let o = twistvol(&["verify", "--config", "/nonexistent/exp.cfg"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_zero_tolerances_enumerate_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = twistvol(&[
        "verify",
        "--p",
        "2",
        "--n-values",
        "10,20,30,40",
        "--tolerance",
        "theorem_155=0",
        "--tolerance",
        "lemma_109=0",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("FAIL theorem_155"), "{s}");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(v["lemma_checks"]["theorem_155"]["passed"], false);
    assert_eq!(v["lemma_checks"]["theorem_155"]["tolerance"].as_f64(), Some(0.0));
}

#[test]
fn lemmas_suites_dispatch() {
    let o = twistvol(&["lemmas", "--suite", "dilog"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 2);
    assert!(s.contains("lemma_98") && s.contains("lemma_100"));

    let o = twistvol(&["lemmas", "--suite", "bounds", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("name,passed,margin,tolerance\n"));

    let o = twistvol(&["lemmas", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_per_p_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sw");
    let o = twistvol(&[
        "sweep",
        "--p-values",
        "2,-2",
        "--n-values",
        "10,20,30,40",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(out.join("report_p2.json").exists());
    assert!(out.join("report_p-2.csv").exists());
    let s = stdout(&o);
    assert!(s.contains("p=2:") && s.contains("p=-2:"), "{s}");
    // the mirror knot carries the same growth sequence
    let a = std::fs::read_to_string(out.join("report_p2.csv")).unwrap();
    let b = std::fs::read_to_string(out.join("report_p-2.csv")).unwrap();
    assert_eq!(a, b);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use radial_core::backtest::fixtures::synthetic_index;

fn radial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radial"))
        .args(args)
        .env("RADIAL_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn field<'a>(line: &'a str, key: &str) -> &'a str {
    line.split_whitespace()
        .find_map(|t| t.strip_prefix(key))
        .unwrap_or_else(|| panic!("no {key} in {line}"))
}

#[test]
fn knn_estimate_on_three_points() {
    let dir = tempfile::tempdir().unwrap();
    let train = write(dir.path(), "t.csv", "x1,x2,y\n0,0,1\n1,0,0\n0,2,1\n");
    let o = radial(&["estimate", "--train", train.to_str().unwrap(), "--query", "0.1,0.1", "--method", "knn", "--params", "k=3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let line = stdout(&o);
    let v: f64 = field(&line, "estimate=").parse().unwrap();
    assert!((v - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(field(&line, "class="), "1");
    assert_eq!(field(&line, "used_points="), "3");
}

#[test]
fn lrlr_on_constant_labels_and_lpor_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let rows: String = (0..20).map(|i| format!("{},1\n", i as f64 / 10.0 - 1.0)).collect();
    let train = write(dir.path(), "ones.csv", &rows);
    let o = radial(&["estimate", "--train", train.to_str().unwrap(), "--query", "-0.05", "--method", "lrlr"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(field(&stdout(&o), "class="), "1");

    // two points inside the bandwidth cannot carry a quadratic
    let sparse = write(dir.path(), "sparse.csv", "# comment\n0,1\n0.1,0\n0.9,1\n");
    let o = radial(&["estimate", "--train", sparse.to_str().unwrap(), "--query", "0", "--method", "lpor", "--params", "h=0.5,q=3"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "fallback_applied="), "true");
}

#[test]
fn usage_and_runtime_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let train = write(dir.path(), "t.csv", "0,1\n1,0\n");
    let t = train.to_str().unwrap();
    assert_eq!(radial(&["backtest", "--method", "knn"]).status.code(), Some(2));
    assert_eq!(radial(&["bench-synthetic", "--reps", "0"]).status.code(), Some(2));
    assert_eq!(radial(&["rate", "--sizes", "100,200"]).status.code(), Some(2));
    assert_eq!(radial(&["estimate", "--train", t, "--query", "0", "--method", "knn", "--params", "k=1,h=2"]).status.code(), Some(2));
    assert_eq!(radial(&["estimate", "--train", t, "--query", "0", "--method", "svm"]).status.code(), Some(2));
    assert_eq!(radial(&["estimate", "--train", t, "--query", "0", "--method", "knn", "--params", "k=5"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.csv", "0,1\n1,0.5\n");
    let o = radial(&["estimate", "--train", bad.to_str().unwrap(), "--query", "0", "--method", "knn", "--params", "k=1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = radial(&["backtest", "--input", dir.path().join("missing.csv").to_str().unwrap(), "--method", "buy"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn rate_reports_both_slopes() {
    let o = radial(&["rate", "--sizes", "100,200,400", "--reps", "30", "--seed", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("n,risk_mean,risk_se\n100,"));
    let summary = String::from_utf8_lossy(&o.stderr);
    assert_eq!(field(&summary, "theoretical_slope="), "-0.8");
    field(&summary, "fitted_slope=").parse::<f64>().unwrap();
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = radial(&["bench-synthetic", "--reps", "2", "--n-train", "150", "--n-test", "40", "--seed", "4", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let z1 = radial(&["zeta", "--sizes", "10,50", "--reps", "5", "--basis", "even"]);
    let z2 = radial(&["zeta", "--sizes", "10,50", "--reps", "5", "--basis", "even"]);
    assert_eq!(z1.stdout, z2.stdout);
    assert!(stdout(&z1).starts_with("N,zeta_over_N_mean,zeta_over_N_sd\n"));
}

#[test]
fn backtest_on_shipped_fixture() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic_index.csv");
    let o = radial(&["backtest", "--input", fixture.to_str().unwrap(), "--method", "buy", "--test-start", "2010-01", "--test-end", "2010-12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("month,prediction,label,chosen_param,return,cumulative"));
    assert!(lines.next().unwrap().starts_with("2010-01,1,"));
    assert_eq!(out.lines().count(), 13);
    assert!(String::from_utf8_lossy(&o.stderr).contains("method=buy months=12"));
}

#[test]
fn shipped_fixture_matches_generator() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic_index.csv");
    let mut expected = Vec::new();
    synthetic_index(420, 2021).write_csv(&mut expected).unwrap();
    assert_eq!(std::fs::read(fixture).unwrap(), expected);
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lobbygame"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

const POINT: [&str; 10] = [
    "--pi1", "0.4", "--pi2", "0.4", "--f1", "0.05", "--f2", "0.05", "--alpha", "2",
];

fn with_point(cmd: &str, extra: &[&str]) -> Vec<String> {
    let mut v = vec![cmd.to_string()];
    v.extend(POINT.iter().map(|s| s.to_string()));
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

fn run_owned(args: &[String]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn solve_then_verify_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("profile.txt");
    let o = run_owned(&with_point(
        "solve",
        &["--capacity", "2", "--out", doc.to_str().unwrap()],
    ));
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&doc).unwrap();
    assert!(text.contains("gamma1 = 0.9375"));

    let o = run(&["verify", "--profile", doc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS overall"));
}

#[test]
fn verify_reports_a_broken_profile() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("profile.txt");
    let o = run_owned(&with_point(
        "solve",
        &["--capacity", "2", "--out", doc.to_str().unwrap()],
    ));
    assert!(o.status.success());
    let text = std::fs::read_to_string(&doc)
        .unwrap()
        .replace("gamma1 = 0.9375", "gamma1 = 0.5");
    std::fs::write(&doc, text).unwrap();
    let o = run(&["verify", "--profile", doc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL overall"));
}

#[test]
fn payoffs_match_known_values() {
    let o = run_owned(&with_point("payoffs", &["--capacity", "1"]));
    assert!(o.status.success());
    assert!(stdout(&o).contains("eu_dp = 2.84"));
    let o = run_owned(&with_point("payoffs", &["--capacity", "2", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["eu_dp"].as_f64().unwrap() - 2.786666666667).abs() < 1e-9);
}

#[test]
fn simulate_is_reproducible() {
    let args = with_point(
        "simulate",
        &["--capacity", "1", "--trials", "20000", "--seed", "3", "--format", "csv"],
    );
    let a = run_owned(&args);
    let b = run_owned(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("chacha8"));
}

#[test]
fn bad_input_exit_codes() {
    // out of range prior
    let o = run(&[
        "solve",
        "--pi1",
        "0.6",
        "--pi2",
        "0.4",
        "--f1",
        "0.1",
        "--f2",
        "0.1",
        "--alpha",
        "2",
        "--capacity",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("OutOfRange"));
    // partial parameter set
    let o = run(&["payoffs", "--pi1", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("InvalidArgument"));
    // construction that does not exist for the capacity
    let o = run_owned(&with_point("solve", &["--capacity", "1", "--regime", "over-lobbying"]));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("RegimeMismatch"));
    // knife edge: C = 1
    let o = run(&[
        "solve",
        "--pi1",
        "0.2",
        "--pi2",
        "0.2",
        "--f1",
        "0.1",
        "--f2",
        "0.1",
        "--alpha",
        "2",
        "--capacity",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["quadrants", "--input", "/definitely/not/here.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FileUnreadable"));
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn quadrant_tables() {
    let o = run(&["quadrants", "--input", &fixture("b_lg.csv"), "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("I,3,1\nII,4,2\nIII,3,0\nIV,3,0\ntotal,13,3"), "{out}");
    assert_eq!(stderr(&o).lines().filter(|l| l.starts_with("Boundary")).count(), 2);

    let dir = tempfile::tempdir().unwrap();
    let countries = dir.path().join("c.csv");
    let o = run(&[
        "quadrants",
        "--input",
        &fixture("u_rn.csv"),
        "--scale",
        "percent",
        "--format",
        "csv",
        "--countries-out",
        countries.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("total,20,10\n"));
    let rows = std::fs::read_to_string(&countries).unwrap();
    assert_eq!(rows.lines().count(), 21);
    assert_eq!(rows.lines().filter(|l| l.contains(",true,")).count(), 10);
}

#[test]
fn sweep_csv_shape() {
    let o = run(&[
        "sweep",
        "--pi1",
        "0.2:0.3:2",
        "--pi2",
        "0.3",
        "--f1",
        "0.1",
        "--f2",
        "0.5",
        "--alpha",
        "2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    // header plus 2 priors x 2 capacities
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("pi1,pi2,f1,f2,alpha,capacity"));
    let width = lines[0].split(',').count();
    assert!(lines.iter().all(|l| l.split(',').count() == width));
}

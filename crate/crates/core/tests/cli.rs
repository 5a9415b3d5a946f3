use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skirental"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn opt_on_ten_agents() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "f3.json",
        r#"{"M":10,"B":10,"G":60,"days":[1,2,3,4,5,6,7,8,9,10]}"#,
    );
    let o = run(&["opt", "--instance", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["ovopt"], 55.0);
    assert_eq!(v["ell_star"], 10);
}

#[test]
fn opt_from_csv_with_params() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.csv", "N\n2\n10\n");
    let o = run(&["opt", "--params", "2,5,8", "--instance", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["indopt"], serde_json::json!([2.0, 5.0]));
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.json", "");
    let o = run(&["opt", "--instance", s(&empty)]);
    assert_eq!(o.status.code(), Some(2));

    let bad = write(&dir, "bad.csv", "N\n2\nx\n");
    let o = run(&["opt", "--params", "2,5,8", "--instance", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let ok = write(&dir, "ok.csv", "N\n2\n10\n");
    let o = run(&["opt", "--params", "2,5,10", "--instance", s(&ok)]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["opt", "--instance", s(&ok)]);
    assert_eq!(o.status.code(), Some(2), "CSV without --params");
    let o = run(&[
        "det",
        "--instance",
        s(&ok),
        "--params",
        "2,5,8",
        "--policy",
        "rand-sd",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["table3", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn det_individual_rational() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.json", r#"{"M":2,"B":5,"G":8,"days":[2,10]}"#);
    let o = run(&[
        "det",
        "--instance",
        s(&f),
        "--policy",
        "det-ind",
        "--agent",
        "1",
        "--ell",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["costs"], serde_json::json!([2.0, 9.0]));
    assert_eq!(v["purchase_day"], 5);
    let wc = &v["worst_case"];
    for key in ["objective", "ell", "revealed", "ratio", "witness"] {
        assert!(wc.get(key).is_some(), "missing {key}");
    }
    assert!((wc["ratio"].as_f64().unwrap() - 1.8).abs() < 1e-12);

    let o = run(&[
        "det",
        "--instance",
        s(&f),
        "--policy",
        "det-ind",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&o), "agent,N,cost\n0,2,2\n1,10,9\n");
}

#[test]
fn rand_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "r.json", r#"{"M":3,"B":4,"G":9,"days":[1,5,6]}"#);
    let args = [
        "rand",
        "--instance",
        s(&f),
        "--policy",
        "rand-sd",
        "--seed",
        "11",
        "--runs",
        "2000",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mc = &json(&a)["monte_carlo"];
    for key in ["n", "mean", "stderr", "exact", "z_score"] {
        assert!(mc.get(key).is_some(), "missing {key}");
    }
    let c = run(&[
        "rand",
        "--instance",
        s(&f),
        "--policy",
        "rand-sd",
        "--seed",
        "12",
        "--runs",
        "2000",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn rand_density_dump() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "r.json", r#"{"M":3,"B":4,"G":9,"days":[1,5,6]}"#);
    let out = dir.path().join("d.csv");
    let o = run(&[
        "rand",
        "--instance",
        s(&f),
        "--policy",
        "rand-sd",
        "--format",
        "csv",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("day,mass,kind,ell,T"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn verify_yao_passes() {
    let o = run(&["verify", "--suite", "yao"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["passed"], true);
    let ratio = v["checks"][0]["detail"]["ratio"].as_f64().unwrap();
    assert!((ratio - 1.581977).abs() < 1e-6);
}

#[test]
fn verify_lp_and_dominance_pass() {
    for suite in ["lp", "dominance"] {
        let o = run(&["verify", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
    }
    let o = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table3_deterministic_rows_match_golden() {
    let o = run(&["table3"]);
    assert_eq!(o.status.code(), Some(0));
    let got = stdout(&o);
    let golden = include_str!("data/table3.csv");
    for (a, b) in got.lines().zip(golden.lines()).take(5) {
        assert_eq!(a, b);
    }
    assert_eq!(got, stdout(&run(&["table3"])));
}

#[test]
fn figure3_series() {
    let o = run(&["figure3", "--subfigure", "a"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("ell,series,ratio,region\n"));
    assert!(text.contains("5,pi_OV,1.750000,B"));

    let o = run(&["figure3", "--subfigure", "c", "--format", "json"]);
    let v = json(&o);
    let pts = v["points"].as_array().unwrap();
    for p in pts.iter().filter(|p| p["ell"] == 0) {
        assert!((p["ratio"].as_f64().unwrap() - 1.504).abs() < 5e-4);
    }

    let o = run(&["figure3", "--subfigure", "d"]);
    assert_eq!(o.status.code(), Some(2));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sendovlab"))
        .args(args)
        .env_remove("SENDOVLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    rd.records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn constants_table_csv() {
    let o = run(&["constants", "--n", "3..7", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("n,u1,u2,d1,d2,slope,"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5);
    let get = |n: usize, col: usize| -> f64 { rows[n - 3][col].parse().unwrap() };
    // u1, u2, d1 at n = 6 and n = 7, to four decimals
    for (n, want) in [
        (6, [-0.2225, -0.9010, -0.3014]),
        (7, [0.0, -std::f64::consts::FRAC_1_SQRT_2, -0.2929]),
    ] {
        for (j, w) in want.iter().enumerate() {
            assert!((get(n, j + 1) - w).abs() < 5e-5, "n={n} col {j}");
        }
    }
    assert!((get(5, 5) + 11.0 / 30.0).abs() < 1e-11);
}

#[test]
fn constants_json_curvature() {
    let v = json(&["constants", "--n", "5", "--format", "json"]);
    let c = v[0]["curvature"].as_f64().unwrap();
    assert!((c - 29.0 / 450.0).abs() < 1e-11);
    assert!((c - 0.064444).abs() < 1e-6);
}

#[test]
fn constants_reject_small_index() {
    assert_eq!(run(&["constants", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "--n", "x"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "lemma8", "--max-n", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failed"));

    let o = run(&["verify", "--suite", "scaling", "--family", "prop6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("target 2.5"));

    let v = json(&["verify", "--suite", "t-identities", "--max-n", "50", "--format", "json"]);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_corollaries_reports_ordering() {
    let v = json(&[
        "verify", "--suite", "corollaries", "--beta", "0.99", "--starts", "4", "--format", "json",
    ]);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"constructed r6 < r4"));
    assert!(names.contains(&"estimated r6 < r4"));
    assert_eq!(v["passed"], Value::Bool(true));
}

#[test]
fn construct_json_shape() {
    let v = json(&["construct", "--family", "prop7", "--n", "6", "--beta", "0.99", "--format", "json"]);
    let coeffs = v["p"]["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 8);
    assert!(coeffs.iter().all(|c| c.as_array().unwrap().len() == 2));
    let dist = v["critical_distance"].as_f64().unwrap();
    let predicted = v["predicted"].as_f64().unwrap();
    assert!((dist - predicted).abs() < 1e-10);
    assert_eq!(v["contracted"]["in_s"], Value::Bool(true));

    assert_eq!(run(&["construct", "--family", "prop7", "--beta", "0.99"]).status.code(), Some(2));
    assert_eq!(
        run(&["construct", "--family", "prop6", "--n", "4", "--beta", "0.99"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["construct", "--family", "prop6", "--beta", "0.5"]).status.code(), Some(2));
}

#[test]
fn estimate_degree_two() {
    let v = json(&["estimate", "--n", "2", "--beta", "0.6", "--starts", "4", "--format", "json"]);
    assert!((v["value"].as_f64().unwrap() - 0.8).abs() < 1e-6);
    assert_eq!(v["converged"], Value::Bool(true));
    assert_eq!(run(&["estimate", "--n", "1", "--beta", "0.6"]).status.code(), Some(2));
}

fn sweep(out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["sweep", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn sweep_is_resumable_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let grid = ["--n", "4..7", "--t", "0.04,0.02,0.01", "--starts", "4", "--seed", "9"];
    assert!(sweep(&a, &grid).status.success());
    let first = fs::read_to_string(&a).unwrap();
    assert_eq!(csv_rows(&first).len(), 12);
    assert!(first.starts_with("n,beta,value,method,starts,seed,converged\n"));

    // rerunning a complete file adds nothing
    assert!(sweep(&a, &grid).status.success());
    assert_eq!(fs::read_to_string(&a).unwrap(), first);

    // an interrupted file is completed to the same bytes
    let b = dir.path().join("b.csv");
    let cut: Vec<&str> = first.lines().take(6).collect();
    fs::write(&b, cut.join("\n") + "\n").unwrap();
    assert!(sweep(&b, &grid).status.success());
    assert_eq!(fs::read_to_string(&b).unwrap(), first);

    assert_eq!(sweep(&a, &["--n", "4", "--t", "0.5"]).status.code(), Some(2));
    assert_eq!(sweep(&a, &["--n", "4", "--t", "0.1", "--format", "json"]).status.code(), Some(2));
}

#[test]
fn sweep_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = sweep(
        &path,
        &["--n", "6", "--t", "0.04,0.02,0.01,0.005", "--methods", "construct"],
    );
    assert!(o.status.success());
    let v = json(&[
        "fit", "--input", path.to_str().unwrap(), "--n", "6", "--method", "construct", "--format", "json",
    ]);
    let c1 = v["c1"].as_f64().unwrap();
    let slope = v["expected"]["slope"].as_f64().unwrap();
    assert!((c1 - slope).abs() < 2e-3, "c1 {c1} slope {slope}");
    assert!((v["c0"].as_f64().unwrap() - 1.0).abs() < 1e-3);

    // too few rows for a fit
    let o = run(&["fit", "--input", path.to_str().unwrap(), "--n", "5", "--method", "construct"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_variable() {
    let ok = Command::new(env!("CARGO_BIN_EXE_sendovlab"))
        .args(["estimate", "--n", "3", "--beta", "0.5", "--starts", "4"])
        .env("SENDOVLAB_THREADS", "2")
        .output()
        .unwrap();
    assert!(ok.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_sendovlab"))
        .args(["constants", "--n", "3"])
        .env("SENDOVLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn corescope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corescope"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = corescope(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn meta(p: &Path) -> Value {
    let mut s = p.as_os_str().to_owned();
    s.push(".meta.json");
    serde_json::from_slice(&fs::read(s).unwrap()).unwrap()
}

#[test]
fn generated_shells_round_trip_through_cores() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.edges");
    let cores = dir.path().join("cores.csv");
    ok(&["gen-shell", "0,4", "--seed", "5", "--output", path_str(&edges)]);
    ok(&["cores", "--input", path_str(&edges), "--output", path_str(&cores)]);
    let m = meta(&cores);
    assert_eq!(m["summary"]["shells"], serde_json::json!([0, 4]));
    assert_eq!(m["command"], "cores");
    assert_eq!(m["seed"], 0);
    assert_eq!(m["input_sha256"].as_str().unwrap().len(), 64);
    let csv = fs::read_to_string(&cores).unwrap();
    assert_eq!(csv.lines().next(), Some("vertex,core"));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",2")));
}

#[test]
fn stats_on_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("path.edges");
    fs::write(&input, "a b\nb c\nc d\nd e\n").unwrap();
    let out = ok(&["stats", "--input", path_str(&input), "--format", "json", "--delta", "1..2"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], 5);
    assert_eq!(v["m"], 4);
    assert_eq!(v["max_degree"], 2);
    assert_eq!(v["degeneracy"], 1);
    assert_eq!(v["diameter"], 4);
    assert_eq!(v["neighborhoods"][0]["max"], 3);
    assert_eq!(v["neighborhoods"][1]["delta"], 2);
}

#[test]
fn estimate_rows_and_labels() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("star.edges");
    fs::write(&input, "# star\nhub x\nhub y\nhub z\n").unwrap();
    let out = ok(&["estimate", "--input", path_str(&input), "--delta", "0..1", "--estimator", "hat"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "vertex,delta,kind,estimate,core,ratio");
    assert!(rows.contains(&"hub,0,propagating,3,1,3"));
    assert!(rows.contains(&"hub,1,propagating,1,1,1"));
    assert_eq!(rows.len(), 1 + 2 * 4);
}

#[test]
fn exposure_columns() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tri.edges");
    fs::write(&input, "0 1\n1 2\n0 2\n").unwrap();
    let out = ok(&["exposure", "--input", path_str(&input), "--kappa", "2", "--p", "0.3", "--trials", "100"]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("vertex,kappa,p,degree_prob,neighbor_degree_prob,pruned_degree_prob,mc_core_estimate,mc_halfwidth")
    );
    // the whole triangle is one 3-net cluster
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(&cells[1..6], &["2", "0.3", "0.3", "0.3", "0.3"]);
    }
}

#[test]
fn cluster_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.edges");
    fs::write(&input, "a b\nb c\n").unwrap();
    let out = ok(&["cluster", "--input", path_str(&input), "--seed", "9"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "vertex,cluster,center");
    assert_eq!(rows.len(), 4);
    assert!(rows[1..].iter().all(|r| r.split(',').nth(1) == Some("0")));
}

#[test]
fn errors_are_single_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.edges");
    fs::write(&bad, "0 1\n1 2 3\n").unwrap();
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["cores", "--input", path_str(&bad)], "parse"),
        (vec!["cores", "--input", "/definitely/missing"], "io"),
        (vec!["gen-shell", "0,0,2"], "generation"),
        (vec!["gen-er", "--n", "5", "--p", "1.5"], "argument"),
    ];
    for (args, kind) in cases {
        let out = corescope(&args);
        assert!(!out.status.success());
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{err}");
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"], kind, "{args:?}");
    }
    let v: Value = serde_json::from_str(
        String::from_utf8(corescope(&["cores", "--input", path_str(&bad)]).stderr)
            .unwrap()
            .trim(),
    )
    .unwrap();
    assert!(v["message"].as_str().unwrap().contains("line 2"));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("er.edges");
    ok(&["gen-er", "--n", "300", "--p", "0.02", "--seed", "2", "--output", path_str(&input)]);
    let args = ["exposure", "--input", path_str(&input), "--kappa", "2", "--p", "0.4", "--trials", "200", "--seed", "4"];
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_corescope"))
            .args(args)
            .env("CORESCOPE_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("3"));
    let bad = Command::new(env!("CARGO_BIN_EXE_corescope"))
        .args(args)
        .env("CORESCOPE_THREADS", "zero")
        .output()
        .unwrap();
    assert!(!bad.status.success());
}

#[test]
fn trees_and_pmf() {
    let out = ok(&["gen-tree", "--j", "2", "--levels", "3"]);
    assert_eq!(out.lines().count(), 6);
    let out = ok(&["gen-tree", "--j", "2", "--levels", "3", "--prime"]);
    assert_eq!(out.lines().count(), 6 + 8);
    let out = ok(&["pmf", "--mean-degree", "3", "--kappa-max", "3"]);
    let first: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[0], "0");
    assert!((first[1].parse::<f64>().unwrap() - (-3.0f64).exp()).abs() < 1e-15);
}

//! End-to-end runs of the `carleson` binary on generated fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use carleson_core::corpus::circle_epsilon;
use carleson_core::RadialGrid;

fn carleson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carleson")).args(args).output().expect("binary runs")
}

fn gen(dir: &Path, args: &[&str]) -> PathBuf {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", dir.to_str().unwrap()]);
    let out = carleson(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let ext = if args.contains(&"--atoms") { "csv" } else { "json" };
    dir.join(format!("{}.{ext}", args[0]))
}

/// Data rows of a CSV artifact with the header comments stripped.
fn rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let data = lines.map(|l| l.split(',').map(|v| v.parse().unwrap_or(f64::NAN)).collect()).collect();
    (header, data)
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

#[test]
fn analyze_line_is_identically_zero() {
    let dir = tempfile::tempdir().unwrap();
    let line = gen(dir.path(), &["line"]);
    let (header, data) = rows(&stdout(&carleson(&["analyze", line.to_str().unwrap(), "--samples", "16"])));
    assert_eq!(&header[..5], ["x", "y", "eps_energy", "alpha_energy", "apsi_energy"]);
    assert!(header[5].starts_with("beta_r="));
    for r in &data {
        assert!(r[2..].iter().all(|&v| v.abs() <= 1e-12), "{r:?}");
    }
}

#[test]
fn analyze_circle_matches_the_oracle_energy() {
    let dir = tempfile::tempdir().unwrap();
    let circle = gen(dir.path(), &["circle", "--n", "4096"]);
    let (_, data) = rows(&stdout(&carleson(&["analyze", circle.to_str().unwrap(), "--samples", "16"])));
    let grid = RadialGrid::new(1e-3, 1.0, 8).unwrap();
    let v: Vec<f64> = grid.nodes.iter().map(|&r| circle_epsilon(r).powi(2)).collect();
    let oracle = grid.integrate(&v);
    for r in &data {
        assert!((r[2] - oracle).abs() <= 1e-3, "{} vs {oracle}", r[2]);
    }
}

#[test]
fn analyze_koch_energy_dominates_the_circle() {
    let dir = tempfile::tempdir().unwrap();
    let med = |path: PathBuf| {
        let (_, data) = rows(&stdout(&carleson(&["analyze", path.to_str().unwrap(), "--samples", "32"])));
        median(data.iter().map(|r| r[2]).collect())
    };
    let circle = med(gen(dir.path(), &["circle", "--n", "4096"]));
    let koch = med(gen(dir.path(), &["koch", "--depth", "5"]));
    assert!(koch >= 10.0 * circle, "{koch} vs {circle}");
}

#[test]
fn malformed_curve_exits_with_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"kind\": \"jordan\",\n  \"vertices\": [[0, 0], [1]]\n}\n").unwrap();
    let out = carleson(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let bad_csv = dir.path().join("bad.csv");
    std::fs::write(&bad_csv, "x,y,w\n0,0,1\n0,zero,1\n").unwrap();
    let out = carleson(&["build-graph", bad_csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(carleson(&["verify", "no-such-suite"]).status.code(), Some(2));
    let out = carleson(&["verify", "whitney"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let count = report["report"]["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["lemma_id"] == "whitney-count")
        .unwrap()
        .clone();
    assert_eq!(count["lhs"], 32.0);
    assert!(report["oracles"].as_array().unwrap().iter().all(|r| r["pass"] == true));
    assert_eq!(carleson(&["verify", "lem54"]).status.code(), Some(0));
}

#[test]
fn build_graph_on_the_axis() {
    let dir = tempfile::tempdir().unwrap();
    let mu = gen(dir.path(), &["line", "--atoms", "1000"]);
    let out = carleson(&["build-graph", mu.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let g: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("graph.json")).unwrap()).unwrap();
    assert!(g["z_mass_fraction"].as_f64().unwrap() >= 0.99);
    assert_eq!(g["max_slope"].as_f64().unwrap(), 0.0);
    for key in ["grid", "values", "pieces", "ld_mass_fraction", "ba_mass_fraction"] {
        assert!(g.get(key).is_some(), "{key}");
    }
    assert!(std::fs::read_to_string(dir.path().join("graph.svg")).unwrap().contains("viewBox"));
}

#[test]
fn build_graph_captures_half_the_mass_of_graph_measures() {
    let dir = tempfile::tempdir().unwrap();
    for noise in ["0", "0.1"] {
        let mu = gen(dir.path(), &["graph", "--atoms", "2000", "--noise", noise]);
        let out = carleson(&["build-graph", mu.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        // artifacts are written even when the slope assertion fails
        assert!(matches!(out.status.code(), Some(0) | Some(1)));
        let g: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("graph.json")).unwrap()).unwrap();
        assert!(g["z_mass_fraction"].as_f64().unwrap() >= 0.5, "noise {noise}");
        let slope_ok = g["max_slope"].as_f64().unwrap() <= 0.1;
        assert_eq!(out.status.code() == Some(0), slope_ok);
    }
}

fn verdicts(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[2].to_string(), f[3].to_string())
        })
        .collect()
}

#[test]
fn tangent_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let circle = gen(dir.path(), &["circle", "--n", "4096"]);
    let v = verdicts(&stdout(&carleson(&["tangent", circle.to_str().unwrap(), "--samples", "32"])));
    assert!(v.iter().all(|(_, t)| t == "tangent"));

    let square = gen(dir.path(), &["square"]);
    let v = verdicts(&stdout(&carleson(&["tangent", square.to_str().unwrap(), "--samples", "32", "--vertices"])));
    let not: Vec<&(String, String)> = v.iter().filter(|(_, t)| t == "not_tangent").collect();
    assert_eq!(not.len(), 4);
    assert!(not.iter().all(|(k, _)| k == "vertex"));

    let koch = gen(dir.path(), &["koch", "--depth", "6"]);
    let v = verdicts(&stdout(&carleson(&["tangent", koch.to_str().unwrap(), "--samples", "32"])));
    assert!(v.iter().all(|(_, t)| t != "tangent"));
}

#[test]
fn outputs_start_with_the_run_config() {
    let dir = tempfile::tempdir().unwrap();
    let mu = gen(dir.path(), &["graph", "--atoms", "500"]);
    let text = std::fs::read_to_string(&mu).unwrap();
    assert!(text.starts_with("# carleson "));
    assert!(text.lines().nth(1).unwrap().starts_with("# config {\"command\":\"gen\""));
    let svg = stdout(&carleson(&["render", mu.to_str().unwrap()]));
    assert!(svg.contains("<!-- carleson ") && svg.contains("viewBox"));
}

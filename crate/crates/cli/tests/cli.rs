use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/fig2").join(name)
}

fn inka(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inka")).args(args).output().expect("binary runs")
}

fn drawing(layout: &str) -> Vec<String> {
    vec![
        "--graph".into(),
        fixture("square.edges").display().to_string(),
        "--layout".into(),
        fixture(layout).display().to_string(),
        "--radius".into(),
        "1".into(),
        "--width".into(),
        "0.1".into(),
    ]
}

fn run(cmd: &str, layout: &str, extra: &[&str]) -> Output {
    let mut args = vec![cmd.to_string()];
    args.extend(drawing(layout));
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    inka(&refs)
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn analyze_square_fixtures() {
    for (layout, ink, cr) in [("parallel.csv", 14.17, 0), ("diagonals.csv", 14.98, 1), ("plus.csv", 14.16, 1)] {
        let v = stdout_json(&run("analyze", layout, &["--format", "json"]));
        let row = &v["row"];
        assert!((row["ink"].as_f64().unwrap() - ink).abs() < 0.02, "{layout}: {row}");
        assert_eq!(row["cr"].as_u64(), Some(cr), "{layout}");
        assert_eq!(v["properness"]["verdict"], Value::Bool(true));
    }
}

#[test]
fn analyze_csv_has_one_row() {
    let out = run("analyze", "parallel.csv", &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("graph_name,layout_name,n,m,r,w,gamma,L,cr,A,ink"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("clarity"));
}

#[test]
fn missing_layout_fails_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.csv");
    let out = inka(&[
        "analyze",
        "--graph",
        fixture("square.edges").to_str().unwrap(),
        "--layout",
        dir.path().join("nope.csv").to_str().unwrap(),
        "--radius",
        "1",
        "--width",
        "0.1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out_path.exists());
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.csv"));
}

#[test]
fn layout_is_deterministic_per_seed() {
    let graph = fixture("square.edges");
    let g = graph.to_str().unwrap();
    let once = |seed: &str| {
        let out = inka(&["layout", "--graph", g, "--algorithm", "force-directed", "--seed", seed]);
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(once("3"), once("3"));
    assert_ne!(once("3"), once("4"));
    let text = String::from_utf8(once("3")).unwrap();
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn unknown_algorithm_is_a_usage_error() {
    let out = inka(&["layout", "--graph", fixture("square.edges").to_str().unwrap(), "--algorithm", "fm3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("fm3") && err.contains("multilevel"), "{err}");
}

#[test]
fn transform_needs_exactly_one_operation() {
    assert_eq!(run("transform", "parallel.csv", &["--scale", "2", "--zoom", "2"]).status.code(), Some(2));
    assert_eq!(run("transform", "parallel.csv", &[]).status.code(), Some(2));
}

#[test]
fn scale_by_one_changes_nothing() {
    let v = stdout_json(&run("transform", "diagonals.csv", &["--scale", "1"]));
    assert_eq!(v["predicted_delta"].as_f64(), Some(0.0));
    assert_eq!(v["measured_delta"].as_f64(), Some(0.0));
}

#[test]
fn scale_delta_matches_prediction() {
    let v = stdout_json(&run("transform", "parallel.csv", &["--scale", "1.5"]));
    let (p, m) = (v["predicted_delta"].as_f64().unwrap(), v["measured_delta"].as_f64().unwrap());
    // w (sigma - 1) L = 0.1 * 0.5 * 20
    assert!((p - 1.0).abs() < 1e-12 && (m - p).abs() < 1e-9, "{v}");
}

#[test]
fn zoom_multiplies_ink() {
    let dir = tempfile::tempdir().unwrap();
    let zoomed = dir.path().join("zoomed.csv");
    let v = stdout_json(&run("transform", "diagonals.csv", &["--zoom", "4", "--out", zoomed.to_str().unwrap()]));
    let (before, after) = (v["ink_before"].as_f64().unwrap(), v["ink_after"].as_f64().unwrap());
    assert!((after / before - 4.0).abs() < 1e-9, "{v}");
    assert!((v["radius_after"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(std::fs::read_to_string(zoomed).unwrap().starts_with("node,x,y"));
}

#[test]
fn full_stubs_reproduce_the_drawing() {
    let v = stdout_json(&run("transform", "diagonals.csv", &["--partial", "1"]));
    assert_eq!(v["crossings_after"], v["crossings_before"]);
    assert_eq!(v["ink_after"], v["ink_before"]);
    let half = stdout_json(&run("partial", "diagonals.csv", &["--ratio", "0.25"]));
    assert_eq!(half["crossings_partial"].as_u64(), Some(0));
    assert!((half["stub_length"].as_f64().unwrap() - 0.25 * 20.0 * 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn render_draws_every_element() {
    let out = run("render", "diagonals.csv", &[]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<circle").count(), 4);
    assert_eq!(svg.matches("<line").count(), 2);
    assert_eq!(svg, String::from_utf8(run("render", "diagonals.csv", &[]).stdout).unwrap());
}

#[test]
fn raster_reports_both_inks() {
    let v = stdout_json(&run("raster", "parallel.csv", &["--resolution", "1024"]));
    let (a, r) = (v["analytic_ink"].as_f64().unwrap(), v["raster_ink"].as_f64().unwrap());
    assert!((r - a).abs() / a < 0.02, "{v}");
}

#[test]
fn bounds_from_raw_quantities() {
    let out = inka(&[
        "bounds", "--nodes", "4", "--edges", "0", "--length", "0", "--radius", "1", "--width", "0", "--gamma", "0.5",
        "--area", "100",
    ]);
    let v = stdout_json(&out);
    let hi = v["r_interval"]["hi"].as_f64().unwrap();
    assert!((hi - 1.995).abs() < 0.01, "{v}");
    // a raw query needs a numeric area
    let out = inka(&["bounds", "--nodes", "4", "--edges", "0", "--length", "0", "--radius", "1", "--width", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("square.edges"), dir.path().join("square.edges")).unwrap();
    let config = dir.path().join("bench.toml");
    std::fs::write(
        &config,
        r#"
settings = [[1.0, 0.0], [1.0, 1.0]]

[[graphs]]
name = "square"
path = "square.edges"

[[graphs]]
name = "grid"
generator = { kind = "grid", rows = 4, cols = 5 }
"#,
    )
    .unwrap();
    let report = dir.path().join("report.csv");
    let out = inka(&["bench", "--config", config.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    // 2 graphs x 4 layouts x 2 settings
    assert_eq!(text.lines().count(), 1 + 16);
    assert!(text.lines().nth(1).unwrap().starts_with("square,random,4,2,"));
}

#[test]
fn bad_thread_count_is_reported() {
    let out = Command::new(env!("CARGO_BIN_EXE_inka"))
        .args(["layout", "--graph", fixture("square.edges").to_str().unwrap(), "--algorithm", "random"])
        .env("INKA_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("INKA_THREADS"));
}

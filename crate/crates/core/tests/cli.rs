#![cfg(feature = "cli")]

use std::path::Path;
use std::process::{Command, Output};

use wandering::cli::{run_scenario, Report, RunOptions};

fn wandering(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wandering")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const EMPTY: &str = r#"{"schema": 1, "name": "empty", "map": {"family": "ex5"}, "items": []}"#;

const MISMATCH: &str = r#"{
  "schema": 1,
  "name": "mismatch",
  "map": {"family": "ex5"},
  "items": [
    {"anchor": "true-check", "kind": "scalar_check", "value": 1, "relation": "lt", "bound": 2},
    {"anchor": "false-check", "kind": "scalar_check", "value": 3, "relation": "lt", "bound": 2}
  ]
}"#;

const SMALL_RASTER: &str = r#"{
  "schema": 1,
  "name": "small-raster",
  "map": {"family": "ex2", "params": {"eps": 1e-5, "r1": 0.03125}},
  "items": [
    {
      "anchor": "raster",
      "kind": "raster_topology",
      "window": [-1, 20, -2.6, 2.6],
      "resolution": [200, 50],
      "corridor": {"origin": [0, 0], "step": ["(mul 2 pi)", 0], "radius": 0.03125},
      "anchors": [{"name": "U1", "point": ["(mul 2 pi)", 0], "connectivity": 1}]
    }
  ]
}"#;

#[test]
fn suites_lists_bundled_scenarios_with_anchors() {
    let out = wandering(&["suites"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["ex1-core", "ex2-core", "ex2-raster", "ex5-strip", "ex34-models"] {
        assert!(text.contains(name), "missing {name}");
    }
    for line in text.lines().filter(|l| l.starts_with("  ")) {
        assert_eq!(line.split_whitespace().count(), 2, "item line without anchor and kind: {line}");
    }
}

#[test]
fn empty_scenario_gives_empty_report_and_success() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "empty.json", EMPTY);
    let out = wandering(&["run", &path]);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.items.is_empty() && report.passed);
}

#[test]
fn mismatch_exits_with_one_and_keeps_every_item() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "m.json", MISMATCH);
    let out = wandering(&["run", &path]);
    assert_eq!(out.status.code(), Some(1));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.items.len(), 2);
    assert!(report.items[0].passed && !report.items[1].passed);
}

#[test]
fn parse_errors_exit_with_two_and_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.json", "{\n  \"schema\": 1,\n  \"name\": [\n}");
    let out = wandering(&["run", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("parse error at 3:"), "{err}");
    assert_eq!(wandering(&["run", "/no/such/file.json"]).status.code(), Some(2));
}

#[test]
fn bundled_run_writes_a_round_tripping_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("ex5.json");
    let out = wandering(&["--threads", "2", "run", "ex5-strip", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(report.scenario, "ex5-strip");
    assert_eq!(report.items.len(), 3);
    let again: Report = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn library_report_round_trips() {
    let report = run_scenario("ex1-core", &RunOptions::default()).unwrap();
    assert!(report.passed);
    assert!(report.derived.contains_key("z0_re"));
    let back: Report = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn rendering_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "r.json", SMALL_RASTER);
    let (a, b) = (dir.path().join("a.ppm"), dir.path().join("b.ppm"));
    for (threads, target) in [("1", &a), ("3", &b)] {
        let out = wandering(&["--threads", threads, "render", &path, "--out", target.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let header = b"P6\n200 50\n255\n";
    assert!(a.starts_with(header));
    assert_eq!(a.len(), header.len() + 200 * 50 * 3);
}

#[test]
fn render_needs_a_raster_item() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "e.json", EMPTY);
    let out = wandering(&["render", &path, "--out", dir.path().join("x.ppm").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

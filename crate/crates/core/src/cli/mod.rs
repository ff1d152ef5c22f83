//! Scenario loading, suite execution, JSON reports and pixmap rendering.
//!
//! Exit statuses: [`EXIT_OK`] when every item matched its expectation,
//! [`EXIT_MISMATCH`] when at least one did not, [`EXIT_CONFIG`] when the
//! scenario could not be read or parsed.

pub mod pixmap;
pub mod report;
pub mod runner;
pub mod scenario;

use std::path::Path;

use crate::error::{Error, Result};

pub use pixmap::{encode_pixmap, label_color, render_pixmap};
pub use report::{ItemReport, Report};
pub use runner::{execute, RunOptions};
pub use scenario::{Item, ItemKind, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Bundled scenarios as `(name, json)`.
pub const BUNDLED: &[(&str, &str)] = &[
    ("ex1-core", include_str!("../../scenarios/ex1-core.json")),
    ("ex2-core", include_str!("../../scenarios/ex2-core.json")),
    ("ex2-raster", include_str!("../../scenarios/ex2-raster.json")),
    ("ex5-strip", include_str!("../../scenarios/ex5-strip.json")),
    ("ex34-models", include_str!("../../scenarios/ex34-models.json")),
];

pub fn bundled(name: &str) -> Option<Scenario> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| Scenario::parse(text).expect("bundled scenarios parse"))
}

/// Loads a scenario file, or a bundled scenario when `source` is not an
/// existing path but matches a bundled name.
pub fn load_scenario(source: &str) -> Result<Scenario> {
    let path = Path::new(source);
    if !path.exists() {
        if let Some(s) = bundled(source) {
            return Ok(s);
        }
    }
    Scenario::parse(&std::fs::read_to_string(path)?)
}

pub fn run_scenario(source: &str, opts: &RunOptions) -> Result<Report> {
    execute(&load_scenario(source)?, opts)
}

/// Bundled scenario names, each followed by its items' anchors and kinds.
pub fn list_suites() -> String {
    let mut out = String::new();
    for (name, _) in BUNDLED {
        let s = bundled(name).expect("bundled scenario");
        out.push_str(&format!("{name}: {}\n", s.description));
        for item in &s.items {
            out.push_str(&format!("  {:<14} {}\n", item.anchor, item.kind.name()));
        }
    }
    out
}

/// Runs only the raster items of a scenario (and the items producing the
/// constants they need), writing the first raster to `out`.
pub fn render_scenario(source: &str, out: &Path, opts: &RunOptions) -> Result<Report> {
    let scenario = load_scenario(source)?;
    if !scenario.items.iter().any(|i| matches!(i.kind, ItemKind::RasterTopology { .. })) {
        return Err(Error::Scenario(format!("scenario `{}` has no raster_topology item", scenario.name)));
    }
    let opts = RunOptions { pixmap_out: Some(out.to_path_buf()), raster_only: true, ..opts.clone() };
    execute(&scenario, &opts)
}

/// Exit status for a finished (or failed) run.
pub fn exit_status(result: &Result<Report>) -> i32 {
    match result {
        Ok(r) if r.passed => EXIT_OK,
        Ok(_) => EXIT_MISMATCH,
        Err(_) => EXIT_CONFIG,
    }
}

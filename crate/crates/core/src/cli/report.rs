//! JSON run reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const TOOL_NAME: &str = "wandering";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemReport {
    pub anchor: String,
    pub kind: String,
    pub expected: Value,
    pub passed: bool,
    pub details: Value,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub items: Vec<ItemReport>,
    /// Constants produced by items, in name order.
    pub derived: BTreeMap<String, f64>,
    pub passed: bool,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(scenario: &str) -> Self {
        Report {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            scenario: scenario.into(),
            items: Vec::new(),
            derived: BTreeMap::new(),
            passed: true,
            elapsed_ms: 0.0,
        }
    }

    pub fn push(&mut self, item: ItemReport) {
        self.passed &= item.passed;
        self.items.push(item);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite")
    }

    /// One line per item: `PASS`/`FAIL`, anchor and kind.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            let flag = if item.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{flag}  {:<14} {} ({:.0} ms)\n", item.anchor, item.kind, item.elapsed_ms));
        }
        out
    }
}

use serde::Serialize;
use serde_json::Value;

use crate::accountant::Totals;

/// JSON document printed by every command.
///
/// Top-level keys are fixed: `tool`, `version`, `command`, `seed`, `result`,
/// `metadata`, `charged` and `warnings`. `seed` is null for commands that draw
/// no randomness; `charged` is the (ε, δ) this run recorded.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub result: Value,
    pub metadata: Value,
    pub charged: Totals,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, seed: Option<u64>) -> Self {
        Self {
            tool: "dpkit",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seed,
            result: Value::Null,
            metadata: Value::Object(Default::default()),
            charged: Totals::default(),
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

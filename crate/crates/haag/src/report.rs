//! JSON report schema.

use haag_core::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub resolved_config: Value,
    pub results: Value,
    pub verdict: Option<String>,
    pub pass: bool,
    pub versions: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn new(command: &str, resolved_config: Value, results: Value, verdict: Option<String>, pass: bool) -> Self {
        Report {
            command: command.to_string(),
            resolved_config,
            results,
            verdict,
            pass,
            versions: json!({ "haag": env!("CARGO_PKG_VERSION"), "haag-core": haag_core::VERSION }),
            timestamp: None,
        }
    }

    pub fn stamped(mut self) -> Self {
        self.timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are plain JSON");
        s.push('\n');
        s
    }

    /// One line for shell pipelines.
    pub fn summary(&self) -> String {
        let verdict = self.verdict.as_deref().unwrap_or("done");
        format!("{}: {} ({})", self.command, verdict, if self.pass { "pass" } else { "fail" })
    }
}

pub fn complex(c: Complex64) -> Value {
    json!({ "re": c.re, "im": c.im })
}

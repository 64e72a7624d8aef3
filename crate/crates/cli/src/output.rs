use serde::Serialize;
use serde_json::Value;

use idgalois::report::{Check, Report, Status};

use crate::{EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

/// The machine-readable result of one command.
#[derive(Clone, Debug, Serialize)]
pub struct CliReport {
    pub command: String,
    pub params: Value,
    pub status: &'static str,
    pub exit_code: i32,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CliReport {
    pub fn from_report(command: &str, params: Value, report: Report, result: Value) -> Self {
        let failed = !report.passed();
        CliReport {
            command: command.into(),
            params,
            status: if failed { "fail" } else { "pass" },
            exit_code: if failed { EXIT_FAIL } else { EXIT_PASS },
            checks: report.checks,
            result,
            error: None,
        }
    }

    pub fn from_error(command: &str, params: Value, error: String) -> Self {
        CliReport {
            command: command.into(),
            params,
            status: "error",
            exit_code: EXIT_USAGE,
            checks: Vec::new(),
            result: Value::Null,
            error: Some(error),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::BoundOnly => "bound-only",
            };
            if c.details.is_empty() {
                out.push_str(&format!("[{tag}] {}\n", c.name));
            } else {
                out.push_str(&format!("[{tag}] {}: {}\n", c.name, c.details));
            }
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        out.push_str(&format!("{}: {}\n", self.command, self.status));
        out
    }
}

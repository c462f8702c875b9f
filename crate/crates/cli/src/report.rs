use std::fmt::Write;

use serde_json::{json, Value};

use crate::{Format, EXIT_CERTIFICATE, EXIT_INPUT, EXIT_PASS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Payload of one subcommand together with its named pass/fail checks.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub checks: Vec<Check>,
    pub result: Value,
    pub dot: Option<String>,
    /// Set when the input itself was rejected (validate).
    pub input_rejected: bool,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            checks: Vec::new(),
            result: json!({}),
            dot: None,
            input_rejected: false,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            passed,
        });
    }

    pub fn passed(&self) -> bool {
        !self.input_rejected && self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.input_rejected {
            EXIT_INPUT
        } else if self.passed() {
            EXIT_PASS
        } else {
            EXIT_CERTIFICATE
        }
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed }))
            .collect();
        json!({
            "command": self.command,
            "passed": self.passed(),
            "checks": checks,
            "result": self.result,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!(
                "{}\n",
                serde_json::to_string_pretty(&self.to_json()).unwrap()
            ),
            Format::Dot => self.dot.clone().unwrap_or_default(),
            Format::Text => {
                let mut s = String::new();
                let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
                for c in &self.checks {
                    let mark = if c.passed { "PASS" } else { "FAIL" };
                    writeln!(s, "{:width$}  {mark}", c.name).unwrap();
                }
                writeln!(
                    s,
                    "{}: {}",
                    self.command,
                    if self.passed() { "PASS" } else { "FAIL" }
                )
                .unwrap();
                s
            }
        }
    }
}

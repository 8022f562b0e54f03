use std::fmt::{self, Write as _};
use std::process::ExitCode;

use serde::Serialize;
use serde_json::Value;

/// Stable process exit contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    InputError,
    BudgetExhausted,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::InputError => 2,
            Status::BudgetExhausted => 3,
        }
    }

    pub fn exit_code(self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub inputs: Value,
    pub verdicts: Vec<Value>,
    pub timing_ms: f64,
    pub seed: Option<u64>,
    pub status: Status,
    pub exit_code: u8,
}

impl RunReport {
    pub fn new(command: &'static str, inputs: Value) -> RunReport {
        RunReport {
            command,
            inputs,
            verdicts: Vec::new(),
            timing_ms: 0.0,
            seed: None,
            status: Status::Pass,
            exit_code: 0,
        }
    }

    pub fn verdict(&mut self, v: impl Serialize) {
        self.verdicts
            .push(serde_json::to_value(v).expect("verdicts serialize"));
    }

    pub fn set_status(&mut self, status: Status) {
        self.status = status;
        self.exit_code = status.code();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A finished command: the report plus its human-readable rendering.
pub struct Outcome {
    pub report: RunReport,
    pub text: String,
}

#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

/// Two-column key/value table.
#[derive(Default)]
pub struct Table {
    out: String,
}

impl Table {
    pub fn row(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        let _ = writeln!(self.out, "{key:<24}{value}");
        self
    }

    /// Multi-line block under a heading, indented two spaces.
    pub fn block(&mut self, heading: &str, body: &str) -> &mut Self {
        let _ = writeln!(self.out, "{heading}");
        for line in body.lines() {
            let _ = writeln!(self.out, "  {line}");
        }
        self
    }

    pub fn finish(&mut self) -> String {
        std::mem::take(&mut self.out)
    }
}

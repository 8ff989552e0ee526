//! CLI reports and the exit-code contract.
//!
//! Reports are deterministic for a fixed seed: the JSON form contains no
//! wall-clock data (timing is printed only in the text format), entry lists
//! are emitted in sorted order, and all random sweeps are seeded.

use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;

/// Exit codes: 0 verified, 1 falsified with witness, 2 invalid input,
/// 3 internal or theorem-violation error.
pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Falsified,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub status: Status,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub certificate: Value,
    /// Present exactly when `status == falsified`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub timing: Option<Duration>,
}

impl Report {
    pub fn verified(command: &str, certificate: Value) -> Self {
        Report {
            status: Status::Verified,
            command: command.to_string(),
            seed: None,
            certificate,
            witness: None,
            error: None,
            timing: None,
        }
    }

    pub fn falsified(command: &str, certificate: Value, witness: Value) -> Self {
        Report {
            status: Status::Falsified,
            command: command.to_string(),
            seed: None,
            certificate,
            witness: Some(witness),
            error: None,
            timing: None,
        }
    }

    pub fn from_error(command: &str, err: &Error) -> Self {
        Report {
            status: Status::Error,
            command: command.to_string(),
            seed: None,
            certificate: Value::Null,
            witness: None,
            error: Some(err.to_string()),
            timing: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Verified => EXIT_VERIFIED,
            Status::Falsified => EXIT_FALSIFIED,
            Status::Error => EXIT_INVALID_INPUT, // refined by the caller via the error kind
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            serde_json::to_string_pretty(report).expect("reports always serialize") + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            let status = match report.status {
                Status::Verified => "verified",
                Status::Falsified => "falsified",
                Status::Error => "error",
            };
            out.push_str(&format!("{}: {}\n", report.command, status));
            if let Some(seed) = report.seed {
                out.push_str(&format!("  seed: {seed}\n"));
            }
            if let Some(err) = &report.error {
                out.push_str(&format!("  error: {err}\n"));
            }
            if let Some(w) = &report.witness {
                out.push_str(&format!("  witness: {w}\n"));
            }
            if !report.certificate.is_null() {
                out.push_str(&format!(
                    "  certificate: {}\n",
                    serde_json::to_string(&report.certificate).expect("serializable")
                ));
            }
            if let Some(t) = report.timing {
                out.push_str(&format!("  elapsed: {:.3}s\n", t.as_secs_f64()));
            }
            out
        }
    }
}

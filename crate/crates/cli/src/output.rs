//! Command outcomes and their two renderings.

use std::process::ExitCode;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    False,
    /// The command ran to completion but found a broken invariant.
    Violation,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

/// The structured record printed for one command.
#[derive(Debug, Serialize)]
pub struct Record {
    pub command: String,
    pub input: Value,
    pub result: Value,
    pub witnesses: Vec<Value>,
    pub timings_ms: Timings,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub total: u64,
}

/// What a command produced, before rendering.
#[derive(Debug)]
pub struct Outcome {
    pub command: &'static str,
    pub input: Value,
    pub result: Value,
    pub witnesses: Vec<Value>,
    pub text: String,
    pub status: Status,
}

impl Outcome {
    pub fn new(command: &'static str, input: Value, result: Value, text: impl Into<String>) -> Self {
        Outcome { command, input, result, witnesses: Vec::new(), text: text.into(), status: Status::Success }
    }

    pub fn with_witnesses(mut self, witnesses: Vec<Value>) -> Self {
        self.witnesses = witnesses;
        self
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn render(self, format: Format, elapsed_ms: u64) -> String {
        match format {
            Format::Text => self.text,
            Format::Structured => {
                let record = Record {
                    command: self.command.to_string(),
                    input: self.input,
                    result: self.result,
                    witnesses: self.witnesses,
                    timings_ms: Timings { total: elapsed_ms },
                };
                serde_json::to_string(&record).expect("records serialize")
            }
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self.status {
            Status::Success => ExitCode::SUCCESS,
            Status::False => ExitCode::from(1),
            Status::Violation => ExitCode::from(3),
        }
    }
}

/// Serializes a value that is known to be representable as JSON.
pub fn json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

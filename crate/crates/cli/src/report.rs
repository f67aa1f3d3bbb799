use std::io::Write;
use std::path::Path;

use schottky::series::{SeriesEstimate, ShellSum, Verdict};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::CliError;

pub const VERSION: &str = env!("SCHOTTKY_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct ErrorObject {
    pub kind: String,
    pub message: String,
}

impl From<&schottky::Error> for ErrorObject {
    fn from(e: &schottky::Error) -> Self {
        Self { kind: e.kind().to_string(), message: e.to_string() }
    }
}

/// The document written by every command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub result: Value,
    pub shells: Vec<ShellSum>,
    pub verdict: Option<Verdict>,
    pub errors: Vec<ErrorObject>,
    pub version: &'static str,
}

impl Report {
    pub fn new(command: &str, config: RunConfig) -> Self {
        Self {
            command: command.to_string(),
            config,
            result: Value::Null,
            shells: Vec::new(),
            verdict: None,
            errors: Vec::new(),
            version: VERSION,
        }
    }

    pub fn set_series(&mut self, estimate: &SeriesEstimate) {
        self.shells = estimate.shells.clone();
        self.verdict = Some(estimate.verdict);
    }

    pub fn write(&self, out: Option<&Path>) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        match out {
            Some(path) => std::fs::write(path, text + "\n")
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                writeln!(stdout, "{text}").map_err(|e| CliError::Io(e.to_string()))
            }
        }
    }
}

/// Serializes a result value; every core type serializes infallibly.
pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

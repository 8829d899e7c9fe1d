//! The result envelope: `{"command", "provenance", "result"}`, written as pretty JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::CliError;

/// What a command produced. `incomplete` carries a message when the result is written but
/// the run did not converge.
pub struct Report {
    pub result: Value,
    pub tolerances: Map<String, Value>,
    pub incomplete: Option<String>,
}

impl Report {
    pub fn new(result: Value) -> Self {
        Report { result, tolerances: Map::new(), incomplete: None }
    }

    pub fn tol(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.tolerances.insert(name.to_string(), value.into());
        self
    }
}

pub struct Context {
    pub command: Vec<&'static str>,
    pub seed: u64,
    pub inputs: Vec<PathBuf>,
}

pub fn provenance(ctx: &Context, tolerances: &Map<String, Value>) -> Value {
    json!({
        "tool": "sfpas",
        "version": env!("CARGO_PKG_VERSION"),
        "seed": ctx.seed,
        "tolerances": tolerances,
        "inputs": ctx.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    })
}

pub fn envelope(ctx: &Context, report: &Report) -> Value {
    json!({
        "command": ctx.command.join(" "),
        "provenance": provenance(ctx, &report.tolerances),
        "result": report.result,
    })
}

pub fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::internal(format!("cannot write output: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

pub fn write_json(out: Option<&Path>, v: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(v).map_err(|e| CliError::internal(e.to_string()))?;
    text.push('\n');
    write_text(out, &text)
}

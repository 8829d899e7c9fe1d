pub mod family;
pub mod invariants;
pub mod quiver;
pub mod toric;
pub mod vortex;

use std::path::PathBuf;

use crate::error::CliError;
use crate::output::{envelope, write_json, Context, Report};
use crate::Global;

/// Writes the envelope, then reports an incomplete run through the exit code.
pub fn finish(command: Vec<&'static str>, inputs: Vec<PathBuf>, g: &Global, report: Report) -> Result<(), CliError> {
    let ctx = Context { command, seed: g.seed, inputs };
    write_json(g.out.as_deref(), &envelope(&ctx, &report))?;
    match report.incomplete {
        Some(msg) => Err(CliError::limits(msg)),
        None => Ok(()),
    }
}

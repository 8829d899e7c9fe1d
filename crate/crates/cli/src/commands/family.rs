use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use serde_json::{json, Value};
use sfpas_core::family::{
    flag_stable, quot_invariants, stromme_check, stromme_refuter, EpsRational, FamilyError, FlagFile, RefuterConfig,
    StrommeFile, StrommeTriple,
};
use sfpas_core::linalg::format_rational;
use sfpas_core::quiver::{kempf_ness_flow, FlowConfig};

use super::finish;
use crate::error::CliError;
use crate::input::read_json;
use crate::output::Report;
use crate::Global;

#[derive(Subcommand)]
pub enum FlagCmd {
    /// Exact verdict and destabilizer for positive levels.
    Check(FlagArgs),
}

#[derive(Args)]
pub struct FlagArgs {
    file: PathBuf,
    /// Fall back to the Kempf–Ness flow when some level is not positive.
    #[arg(long)]
    numerical: bool,
    #[arg(long, default_value_t = FlowConfig::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = FlowConfig::default().max_iter)]
    max_iter: usize,
}

#[derive(Subcommand)]
pub enum StrommeCmd {
    /// Both non-degeneracy conditions, the quotient invariants and optionally a refuter run.
    Check(StrommeArgs),
    /// Search for subspaces violating stability at `(s, t)`.
    Refute(StrommeArgs),
    /// Rank and degree of the quotient sheaf.
    Quot(QuotArgs),
}

#[derive(Args)]
pub struct StrommeArgs {
    file: PathBuf,
    /// Stability parameter `s`, a rational optionally with an infinitesimal part ("1+eps").
    #[arg(long, default_value = "1+eps")]
    s: String,
    #[arg(long, default_value = "1")]
    t: String,
    /// Also run the refuter (`check` only).
    #[arg(long)]
    refute: bool,
    #[arg(long, default_value_t = RefuterConfig::default().trials)]
    trials: usize,
}

#[derive(Args)]
pub struct QuotArgs {
    file: PathBuf,
}

pub fn run_flag(cmd: FlagCmd, g: &Global) -> Result<(), CliError> {
    let FlagCmd::Check(a) = cmd;
    let file: FlagFile = read_json(&a.file)?;
    let chain = file.chain()?;
    let result = match flag_stable(&chain) {
        Ok((verdict, witness)) => json!({
            "method": "exact",
            "verdict": verdict,
            "witness": witness.map(|w| json!({ "xi": w.xi.blocks, "pairing": format_rational(&w.pairing) })),
        }),
        Err(FamilyError::NonPositiveLevel { .. }) if a.numerical => {
            let (prob, p, lvl) = chain.to_quiver()?;
            let cfg = FlowConfig { tol: a.tol, max_iter: a.max_iter, seed: g.seed, ..FlowConfig::default() };
            let r = kempf_ness_flow(&prob, &p, &lvl, &cfg)?;
            json!({ "method": "numerical", "verdict": r.verdict, "stop": r.stop, "final_energy": r.final_energy })
        }
        Err(e) => return Err(e.into()),
    };
    let mut report = Report::new(result);
    if a.numerical {
        report = report.tol("tol", a.tol).tol("max_iter", a.max_iter);
    }
    finish(vec!["flag", "check"], vec![a.file], g, report)
}

fn load(path: &Path) -> Result<StrommeTriple, CliError> {
    let file: StrommeFile = read_json(path)?;
    Ok(file.triple()?)
}

fn parameter(s: &str) -> Result<EpsRational, CliError> {
    s.parse().map_err(|e| CliError::invalid(format!("bad parameter {s:?}: {e}")))
}

fn refute_json(t: &StrommeTriple, a: &StrommeArgs, seed: u64) -> Result<Value, CliError> {
    let (s, tt) = (parameter(&a.s)?, parameter(&a.t)?);
    let w = stromme_refuter(t, &s, &tt, &RefuterConfig { seed, trials: a.trials })?;
    Ok(json!({ "s": s, "t": tt, "refuted": w.is_some(), "witness": w }))
}

pub fn run_stromme(cmd: StrommeCmd, g: &Global) -> Result<(), CliError> {
    match cmd {
        StrommeCmd::Check(a) => {
            let t = load(&a.file)?;
            let check = stromme_check(&t)?;
            let invariants = if check.is_triple { Some(quot_invariants(&t)?) } else { None };
            let mut result = json!({ "check": check, "invariants": invariants });
            let mut report = Report::new(Value::Null);
            if a.refute {
                result["refute"] = refute_json(&t, &a, g.seed)?;
                report = report.tol("trials", a.trials);
            }
            report.result = result;
            finish(vec!["stromme", "check"], vec![a.file], g, report)
        }
        StrommeCmd::Refute(a) => {
            let t = load(&a.file)?;
            let report = Report::new(refute_json(&t, &a, g.seed)?).tol("trials", a.trials);
            finish(vec!["stromme", "refute"], vec![a.file], g, report)
        }
        StrommeCmd::Quot(a) => {
            let t = load(&a.file)?;
            let report = Report::new(serde_json::to_value(quot_invariants(&t)?).expect("plain struct"));
            finish(vec!["stromme", "quot"], vec![a.file], g, report)
        }
    }
}

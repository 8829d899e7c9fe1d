use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};
use sfpas_core::linalg::{CMatrix, FloatMatrix, HermitianTuple};
use sfpas_core::quiver::{
    hamiltonian_check, kempf_ness_flow, level_to_json, point_to_json, properness_refuter, FlowConfig, FlowResult,
    Level, QuiverFile, QuiverPoint, QuiverProblem, StopReason,
};

use super::finish;
use crate::error::CliError;
use crate::input::read_json;
use crate::output::Report;
use crate::Global;

#[derive(Subcommand)]
pub enum QuiverCmd {
    /// Run the Kempf–Ness flow from the file's point (or a seeded random unit point).
    Flow(FlowArgs),
    /// Only the numerical stability verdict of the flow.
    Verdict(FlowArgs),
    /// Finite-difference check of the moment-map identity at seeded random directions.
    HamiltonianCheck(HamiltonianArgs),
    /// Search for a nonzero zero of the level-zero moment map.
    Properness(PropernessArgs),
}

#[derive(Args)]
pub struct FlowOpts {
    #[arg(long, default_value_t = FlowConfig::default().step)]
    step: f64,
    #[arg(long, default_value_t = FlowConfig::default().max_iter)]
    max_iter: usize,
    #[arg(long, default_value_t = FlowConfig::default().tol)]
    tol: f64,
}

impl FlowOpts {
    fn config(&self, seed: u64) -> Result<FlowConfig, CliError> {
        if !(self.step > 0.0 && self.tol > 0.0) {
            return Err(CliError::invalid("step and tol must be positive"));
        }
        Ok(FlowConfig { step: self.step, max_iter: self.max_iter, tol: self.tol, seed })
    }

    fn tolerances(&self, report: Report) -> Report {
        report.tol("step", self.step).tol("max_iter", self.max_iter).tol("tol", self.tol)
    }
}

#[derive(Args)]
pub struct FlowArgs {
    file: PathBuf,
    #[command(flatten)]
    opts: FlowOpts,
}

#[derive(Args)]
pub struct HamiltonianArgs {
    file: PathBuf,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-5)]
    h: f64,
    /// Number of random (point, ξ, w) samples.
    #[arg(long, default_value_t = 10)]
    samples: usize,
}

#[derive(Args)]
pub struct PropernessArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[command(flatten)]
    opts: FlowOpts,
}

struct Loaded {
    prob: QuiverProblem,
    point: Option<QuiverPoint>,
    level: Level,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let file: QuiverFile = read_json(path)?;
    let prob = file.problem()?;
    let point = file.point(&prob)?;
    let level = file.level(&prob)?.unwrap_or_else(|| prob.zero_level());
    Ok(Loaded { prob, point, level })
}

fn flow_json(prob: &QuiverProblem, r: &FlowResult) -> Value {
    json!({
        "verdict": r.verdict,
        "stop": r.stop,
        "final_energy": r.final_energy,
        "iterations": r.iterations,
        "min_singular_value": r.min_singular_value,
        "log_growth": r.log_growth,
        "final_point": point_to_json(prob, &r.final_point),
    })
}

fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_hermitian<R: Rng>(prob: &QuiverProblem, rng: &mut R) -> Result<HermitianTuple, CliError> {
    let blocks = prob
        .block_sizes()
        .into_iter()
        .map(|n| {
            let a = FloatMatrix::from_fn(n, n, |_, _| gaussian(rng));
            Ok(CMatrix::Float(a.add(&a.adjoint())?.scale(&Complex64::from(0.5))))
        })
        .collect::<Result<_, CliError>>()?;
    Ok(HermitianTuple::new(blocks)?)
}

pub fn run(cmd: QuiverCmd, g: &Global) -> Result<(), CliError> {
    match cmd {
        QuiverCmd::Flow(a) => flow(a, g, false),
        QuiverCmd::Verdict(a) => flow(a, g, true),
        QuiverCmd::HamiltonianCheck(a) => hamiltonian(a, g),
        QuiverCmd::Properness(a) => properness(a, g),
    }
}

fn flow(a: FlowArgs, g: &Global, verdict_only: bool) -> Result<(), CliError> {
    let cfg = a.opts.config(g.seed)?;
    let l = load(&a.file)?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let (start, source) = match l.point {
        Some(p) => (p, "file"),
        None => (l.prob.random_unit_point(&mut rng), "random"),
    };
    let r = kempf_ness_flow(&l.prob, &start, &l.level, &cfg)?;
    let result = if verdict_only {
        json!({ "verdict": r.verdict, "stop": r.stop, "final_energy": r.final_energy, "iterations": r.iterations })
    } else {
        let mut v = flow_json(&l.prob, &r);
        v["start"] = json!(source);
        v["level"] = level_to_json(&l.prob, &l.level);
        v
    };
    let mut report = a.opts.tolerances(Report::new(result));
    if r.stop == StopReason::MaxIter {
        report.incomplete = Some(format!("flow stopped after {} iterations at energy {:e}", r.iterations, r.final_energy));
    }
    let name = if verdict_only { "verdict" } else { "flow" };
    finish(vec!["quiver", name], vec![a.file], g, report)
}

fn hamiltonian(a: HamiltonianArgs, g: &Global) -> Result<(), CliError> {
    if !(a.h > 0.0 && a.h <= 1e-3) {
        return Err(CliError::invalid("h must lie in (0, 1e-3]"));
    }
    let l = load(&a.file)?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut errors = Vec::with_capacity(a.samples);
    for _ in 0..a.samples {
        let p = match &l.point {
            Some(p) => p.clone(),
            None => l.prob.random_unit_point(&mut rng),
        };
        let xi = random_hermitian(&l.prob, &mut rng)?;
        let w = l.prob.random_unit_point(&mut rng);
        errors.push(hamiltonian_check(&l.prob, &p, &l.level, &xi, &w, a.h)?);
    }
    let max = errors.iter().copied().fold(0.0, f64::max);
    let report = Report::new(json!({ "max_error": max, "errors": errors })).tol("h", a.h).tol("samples", a.samples);
    finish(vec!["quiver", "hamiltonian-check"], vec![a.file], g, report)
}

fn properness(a: PropernessArgs, g: &Global) -> Result<(), CliError> {
    let cfg = a.opts.config(g.seed)?;
    let l = load(&a.file)?;
    let witness = properness_refuter(&l.prob, &cfg, a.trials)?;
    let result = json!({
        "refuted": witness.is_some(),
        "witness": witness.map(|p| point_to_json(&l.prob, &p)),
    });
    let report = a.opts.tolerances(Report::new(result)).tol("trials", a.trials);
    finish(vec!["quiver", "properness"], vec![a.file], g, report)
}

use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde_json::json;
use sfpas_core::vortex::{
    bradlow_threshold, quantization_check, solve_vortex, threshold_scan, Center, TorusGrid, VortexConfig,
    VortexProblem,
};

use super::finish;
use crate::error::CliError;
use crate::output::{provenance, write_text, Context, Report};
use crate::Global;

#[derive(Subcommand)]
pub enum VortexCmd {
    /// Solve at one parameter value and write the field.
    Solve(SolveArgs),
    /// Solve over a range of parameters; CSV with columns t, converged, residual, iterations.
    Scan(ScanArgs),
}

#[derive(Args)]
pub struct ProblemArgs {
    /// Grid points per side (a power of two, at least 16).
    #[arg(long = "N", default_value_t = 64)]
    n: usize,
    /// Side length of the torus.
    #[arg(long = "L", default_value_t = 2.0 * std::f64::consts::PI)]
    l: f64,
    /// Degree, at most 0; there are `−d` vortices counted with multiplicity.
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    d: i64,
    /// Fractional centres `x,y[,mult]` separated by `;`. Defaults to `−d` centres on the diagonal.
    #[arg(long)]
    centers: Option<String>,
    /// Width of the wells; `L/16` by default.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    #[command(flatten)]
    cfg: ConfigArgs,
}

#[derive(Args)]
pub struct ConfigArgs {
    #[arg(long, default_value_t = VortexConfig::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = VortexConfig::default().max_newton)]
    max_newton: usize,
    #[arg(long, default_value_t = VortexConfig::default().damping)]
    damping: f64,
    #[arg(long, default_value_t = VortexConfig::default().max_cg)]
    max_cg: usize,
}

#[derive(Args)]
pub struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
}

#[derive(Args)]
pub struct ScanArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, allow_hyphen_values = true)]
    t_from: f64,
    #[arg(long, allow_hyphen_values = true)]
    t_to: f64,
    #[arg(long, default_value_t = 11)]
    steps: usize,
}

fn centers(spec: Option<&str>, d: i64) -> Result<Vec<Center>, CliError> {
    let Some(spec) = spec else {
        let n = (-d).max(0) as usize;
        return Ok((0..n)
            .map(|k| {
                let s = (k as f64 + 0.5) / n as f64;
                Center { x: s, y: s, mult: 1 }
            })
            .collect());
    };
    spec.split(';')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(|c| {
            let bad = || CliError::invalid(format!("bad centre {c:?}; expected x,y or x,y,mult"));
            let parts: Vec<&str> = c.split(',').map(str::trim).collect();
            if !(2..=3).contains(&parts.len()) {
                return Err(bad());
            }
            let x: f64 = parts[0].parse().map_err(|_| bad())?;
            let y: f64 = parts[1].parse().map_err(|_| bad())?;
            let mult: u32 = parts.get(2).map_or(Ok(1), |m| m.parse().map_err(|_| bad()))?;
            Ok(Center { x, y, mult })
        })
        .collect()
}

impl ProblemArgs {
    fn problem(&self, t: f64) -> Result<VortexProblem, CliError> {
        let grid = TorusGrid::new(self.n, self.l)?;
        let mut p = VortexProblem::new(grid, self.d, centers(self.centers.as_deref(), self.d)?, t)?;
        if let Some(s) = self.sigma {
            p.sigma = s;
        }
        p.amplitude = self.amplitude;
        p.validate()?;
        Ok(p)
    }

    fn config(&self) -> Result<VortexConfig, CliError> {
        let c = &self.cfg;
        if !(c.tol > 0.0 && c.damping > 0.0 && c.damping < 1.0) {
            return Err(CliError::invalid("tol must be positive and damping in (0, 1)"));
        }
        Ok(VortexConfig { tol: c.tol, max_newton: c.max_newton, damping: c.damping, max_cg: c.max_cg })
    }

    fn tolerances(&self, r: Report) -> Report {
        let c = &self.cfg;
        r.tol("tol", c.tol).tol("max_newton", c.max_newton).tol("damping", c.damping).tol("max_cg", c.max_cg)
    }
}

pub fn run(cmd: VortexCmd, g: &Global) -> Result<(), CliError> {
    match cmd {
        VortexCmd::Solve(a) => {
            let p = a.problem.problem(a.t)?;
            let cfg = a.problem.config()?;
            let f = solve_vortex(&p, &cfg)?;
            let quantization = if f.converged { Some(quantization_check(&f, &p)?) } else { None };
            let rows: Vec<&[f64]> = f.u.chunks(f.n).collect();
            let result = json!({
                "problem": p,
                "threshold": bradlow_threshold(p.d, p.grid.vol()),
                "tau0": f.tau0,
                "converged": f.converged,
                "residual_sup": f.residual_sup,
                "iterations": f.iterations,
                "quantization": quantization,
                "u": rows,
            });
            let mut report = a.problem.tolerances(Report::new(result));
            if !f.converged {
                report.incomplete =
                    Some(format!("no convergence after {} Newton steps (residual {:e})", f.iterations, f.residual_sup));
            }
            finish(vec!["vortex", "solve"], Vec::new(), g, report)
        }
        VortexCmd::Scan(a) => {
            if a.steps == 0 {
                return Err(CliError::invalid("steps must be positive"));
            }
            let base = a.problem.problem(a.t_from)?;
            let cfg = a.problem.config()?;
            let ts: Vec<f64> = (0..a.steps)
                .map(|k| if a.steps == 1 { a.t_from } else { a.t_from + (a.t_to - a.t_from) * k as f64 / (a.steps - 1) as f64 })
                .collect();
            let rows = threshold_scan(&base, &ts, &cfg)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["t", "converged", "residual", "iterations"]).map_err(|e| CliError::internal(e.to_string()))?;
            for r in &rows {
                let residual = r.residual.map_or_else(String::new, |x| format!("{x:e}"));
                w.write_record([r.t.to_string(), r.converged.to_string(), residual, r.iterations.to_string()])
                    .map_err(|e| CliError::internal(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::internal(e.to_string()))?;
            let text = String::from_utf8(bytes).map_err(|e| CliError::internal(e.to_string()))?;
            // CSV carries no metadata, so the provenance goes to standard error
            let ctx = Context { command: vec!["vortex", "scan"], seed: g.seed, inputs: Vec::<PathBuf>::new() };
            eprintln!("{}", provenance(&ctx, &a.problem.tolerances(Report::new(json!(null))).tolerances));
            write_text(g.out.as_deref(), &text)
        }
    }
}

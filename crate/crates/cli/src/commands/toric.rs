use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::json;
use sfpas_core::linalg::format_rational;
use sfpas_core::toric::{
    chamber_fan_search, check_p1, check_p2, k_membership, quotient_nonempty, semistable_lp, u_membership, validate_fan,
    Fan, ToricMatrix,
};

use super::finish;
use crate::error::CliError;
use crate::input::{index_list, rational_list, read_json};
use crate::output::Report;
use crate::Global;

/// `{"v": [[1, -1]], "fan": {"max_cones": [[1], [2]]}}`; the fan is optional.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ToricFile {
    v: ToricMatrix,
    #[serde(default)]
    fan: Option<Fan>,
}

#[derive(Subcommand)]
pub enum ToricCmd {
    /// Matrix conditions and, when a fan is given, the fan checks.
    Validate(FileArg),
    /// Membership of the level in `K(Σ)` and `K₀(Σ)`.
    Membership(LevelArgs),
    /// Semistability and stability of points with a given support.
    Stability(StabilityArgs),
    /// A complete simplicial fan whose `K₀` contains the level.
    Chamber(LevelArgs),
    /// Whether the quotient at the level is nonempty.
    Nonempty(LevelArgs),
}

#[derive(Args)]
pub struct FileArg {
    file: PathBuf,
}

#[derive(Args)]
pub struct LevelArgs {
    file: PathBuf,
    /// Representative `a ∈ ℚ^r` of the level, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    level_rep: String,
}

#[derive(Args)]
pub struct StabilityArgs {
    file: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    level_rep: String,
    /// 1-based indices of the nonzero coordinates.
    #[arg(long, default_value = "")]
    support: String,
}

fn load(path: &Path) -> Result<ToricFile, CliError> {
    read_json(path)
}

fn level(v: &ToricMatrix, s: &str) -> Result<Vec<BigRational>, CliError> {
    let a = rational_list(s)?;
    if a.len() != v.r() {
        return Err(CliError::invalid(format!("level has {} entries, expected {}", a.len(), v.r())));
    }
    Ok(a)
}

fn strings(xs: &[BigRational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|j| j + 1).collect()
}

pub fn run(cmd: ToricCmd, g: &Global) -> Result<(), CliError> {
    match cmd {
        ToricCmd::Validate(a) => {
            let f = load(&a.file)?;
            let p1 = check_p1(&f.v);
            let p2 = check_p2(&f.v);
            let fan = f.fan.as_ref().map(|fan| validate_fan(fan, &f.v)).transpose()?;
            let result = json!({
                "p1": { "holds": p1.holds, "offending_column": p1.offending_column.map(|j| j + 1) },
                "p2": { "holds": p2.holds, "certificate": p2.certificate.as_deref().map(strings) },
                "fan": fan,
            });
            finish(vec!["toric", "validate"], vec![a.file], g, Report::new(result))
        }
        ToricCmd::Membership(a) => {
            let f = load(&a.file)?;
            let fan = f.fan.ok_or_else(|| CliError::invalid("membership needs a fan"))?;
            let lvl = level(&f.v, &a.level_rep)?;
            let k = k_membership(&fan, &f.v, &lvl)?;
            let result = json!({ "in_k": k.in_k, "in_k0": k.in_k0, "coker": strings(&f.v.p_v(&lvl)) });
            finish(vec!["toric", "membership"], vec![a.file], g, Report::new(result))
        }
        ToricCmd::Stability(a) => {
            let f = load(&a.file)?;
            let lvl = level(&f.v, &a.level_rep)?;
            let support = index_list(&a.support, f.v.r())?;
            let s = semistable_lp(&f.v, &lvl, &support)?;
            let result = json!({
                "support": one_based(&support),
                "semistable": s.semistable,
                "stable": s.stable,
                "in_u": f.fan.as_ref().map(|fan| u_membership(fan, f.v.r(), &support)),
            });
            finish(vec!["toric", "stability"], vec![a.file], g, Report::new(result))
        }
        ToricCmd::Chamber(a) => {
            let f = load(&a.file)?;
            let lvl = level(&f.v, &a.level_rep)?;
            let fan = chamber_fan_search(&f.v, &lvl)?;
            finish(vec!["toric", "chamber"], vec![a.file], g, Report::new(json!({ "fan": fan })))
        }
        ToricCmd::Nonempty(a) => {
            let f = load(&a.file)?;
            let lvl = level(&f.v, &a.level_rep)?;
            let result = json!({ "nonempty": quotient_nonempty(&f.v, &lvl)?, "coker": strings(&f.v.p_v(&lvl)) });
            finish(vec!["toric", "nonempty"], vec![a.file], g, Report::new(result))
        }
    }
}

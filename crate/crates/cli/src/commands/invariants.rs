use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use sfpas_core::invariants::{
    abelian_expected_dimension, algebra_degree, expected_dimension, ggw_abelian, quot_count, AbelianProblem,
    ClassFile, ClassKind, ExteriorClass, ThresholdSide,
};

use super::finish;
use crate::error::CliError;
use crate::input::read_json;
use crate::output::Report;
use crate::Global;

#[derive(Subcommand)]
pub enum InvariantsCmd {
    /// The abelian gauge-theoretic Gromov–Witten invariant at a class `l`.
    Ggw(GgwArgs),
    /// Number of points of the zero-dimensional rank-one Quot scheme.
    QuotCount(QuotCountArgs),
    /// Expected dimension of the moduli space.
    ExpectedDim(DimArgs),
    /// Degrees of the generators of the tautological algebra.
    Degrees(DegreeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Above,
    Below,
}

#[derive(Args)]
pub struct GgwArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    r0: u32,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    #[arg(long, allow_hyphen_values = true)]
    d0: i64,
    /// Side of the threshold.
    #[arg(long, value_enum, default_value = "above")]
    side: Side,
    /// `one`, `top`, or the path of a class file `{"g": .., "terms": [{"gens": [..], "coeff": ..}]}`.
    #[arg(long, default_value = "one")]
    l: String,
}

#[derive(Args)]
pub struct QuotCountArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    r0: u32,
}

#[derive(Args)]
pub struct DimArgs {
    #[arg(long, default_value_t = 1)]
    r: i64,
    #[arg(long)]
    r0: i64,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    #[arg(long, allow_hyphen_values = true)]
    d0: i64,
    #[arg(long)]
    g: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    U,
    V,
    H1,
}

#[derive(Args)]
pub struct DegreeArgs {
    #[arg(long)]
    r: u32,
    /// A single generator family; all of them when omitted.
    #[arg(long, value_enum, requires = "index")]
    kind: Option<Kind>,
    #[arg(long, requires = "kind")]
    index: Option<u32>,
}

fn int_json(n: &BigInt) -> Value {
    i64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from)
}

fn class(spec: &str, g: u32) -> Result<(ExteriorClass, Vec<PathBuf>), CliError> {
    match spec {
        "one" => Ok((ExteriorClass::one(g)?, Vec::new())),
        "top" => Ok((ExteriorClass::top(g)?, Vec::new())),
        path => {
            let path = PathBuf::from(path);
            let file: ClassFile = read_json(&path)?;
            Ok((file.class()?, vec![path]))
        }
    }
}

fn kind(k: Kind) -> ClassKind {
    match k {
        Kind::U => ClassKind::U,
        Kind::V => ClassKind::V,
        Kind::H1 => ClassKind::H1,
    }
}

pub fn run(cmd: InvariantsCmd, g: &Global) -> Result<(), CliError> {
    match cmd {
        InvariantsCmd::Ggw(a) => {
            if a.r0 == 0 {
                return Err(CliError::invalid("r0 must be at least 1"));
            }
            let (l, inputs) = class(&a.l, a.g)?;
            let side = match a.side {
                Side::Above => ThresholdSide::Above,
                Side::Below => ThresholdSide::Below,
            };
            let p = AbelianProblem { g: a.g, r0: a.r0, d: a.d, d0: a.d0, side };
            let v = ggw_abelian(&p, &l)?;
            let terms: Vec<Value> = v.terms.iter().map(|(i, c)| json!({ "i": i, "contribution": int_json(c) })).collect();
            let result = json!({ "value": int_json(&v.value), "v": v.v, "terms": terms, "l": ClassFile::from(&l) });
            finish(vec!["invariants", "ggw"], inputs, g, Report::new(result))
        }
        InvariantsCmd::QuotCount(a) => {
            if a.r0 == 0 {
                return Err(CliError::invalid("r0 must be at least 1"));
            }
            let result = json!({ "count": int_json(&quot_count(a.g, a.r0)) });
            finish(vec!["invariants", "quot-count"], Vec::new(), g, Report::new(result))
        }
        InvariantsCmd::ExpectedDim(a) => {
            if a.r < 1 || a.r0 < 1 {
                return Err(CliError::invalid("r and r0 must be at least 1"));
            }
            let general = expected_dimension(a.r, a.r0, a.d, a.d0, a.g);
            let abelian = (a.r == 1).then(|| abelian_expected_dimension(a.r0, a.d, a.d0, a.g));
            let result = json!({ "expected_dimension": general, "abelian_formula": abelian });
            finish(vec!["invariants", "expected-dim"], Vec::new(), g, Report::new(result))
        }
        InvariantsCmd::Degrees(a) => {
            let result = match (a.kind, a.index) {
                (Some(k), Some(i)) => json!({ "kind": kind(k), "index": i, "degree": algebra_degree(a.r, kind(k), i)? }),
                _ => {
                    let mut rows = Vec::new();
                    for k in [ClassKind::U, ClassKind::V, ClassKind::H1] {
                        let lo = if k == ClassKind::V { 2 } else { 1 };
                        for i in lo..=a.r {
                            rows.push(json!({ "kind": k, "index": i, "degree": algebra_degree(a.r, k, i)? }));
                        }
                    }
                    json!({ "r": a.r, "degrees": rows })
                }
            };
            finish(vec!["invariants", "degrees"], Vec::new(), g, Report::new(result))
        }
    }
}

//! Exact stability for two concrete families: flag chains `V_1 → … → V_{m+1}` and
//! Strømme triples `(k, l, m)` of maps `U ⇉ V ← W`.

mod eps;
mod flag;
mod stromme;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::quiver::QuiverError;

pub use eps::EpsRational;
pub use flag::{flag_stable, grassmann_quotient_type, DestabilizerWitness, FlagChain, FlagFile, QuotientType};
pub use stromme::{
    quot_invariants, stromme_check, stromme_refuter, Clause, QuotInvariants, RefuterConfig, StrommeCheck,
    StrommeFile, StrommeTriple, StrommeWitness, MAX_STROMME_V,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("dimension inconsistency: {0}")]
    Dimension(String),
    #[error("every level must be positive for the exact test (t_{index} = {value}); use the numerical oracle")]
    NonPositiveLevel { index: usize, value: String },
    #[error("stability parameters must be positive")]
    NonPositiveParameter,
    #[error("not a Strømme triple")]
    NotATriple,
    #[error("dimension limit exceeded: {0}")]
    Limits(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

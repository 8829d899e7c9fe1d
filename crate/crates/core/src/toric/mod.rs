//! Toric problems: integer ray matrices, simplicial fans, the level cones and abelian
//! semistability decided by exact linear programming.

mod chamber;
mod fan;
mod level;
mod matrix;

use thiserror::Error;

pub use chamber::{chamber_fan_search, MAX_CHAMBER_M, MAX_CHAMBER_R};
pub use fan::{face_functional, validate_fan, Fan, FanValidation, COVERAGE_SAMPLES};
pub use level::{
    check_p1, check_p2, k_membership, quotient_nonempty, semistable_lp, u_membership, KMembership, P1Report,
    P2Report, Semistability,
};
pub use matrix::ToricMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ToricError {
    #[error("invalid toric data: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("search limits exceeded: {0}")]
    Limits(String),
}

use std::fmt;

use sfpas_core::family::FamilyError;
use sfpas_core::invariants::InvariantsError;
use sfpas_core::quiver::QuiverError;
use sfpas_core::toric::ToricError;
use sfpas_core::vortex::VortexError;
use sfpas_core::LinalgError;

/// Invalid input: unreadable files, malformed data, violated preconditions.
pub const INVALID: u8 = 2;
/// Non-convergence or exceeded search limits.
pub const LIMITS: u8 = 3;
pub const INTERNAL: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError { code: INVALID, message: message.into() }
    }

    pub fn limits(message: impl Into<String>) -> Self {
        CliError { code: LIMITS, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { code: INTERNAL, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn linalg_code(e: &LinalgError) -> u8 {
    match e {
        LinalgError::NoConvergence => LIMITS,
        LinalgError::ModeMismatch { .. } | LinalgError::Singular => INTERNAL,
        LinalgError::Shape(_) | LinalgError::NotHermitian(_) | LinalgError::Parse(_) => INVALID,
    }
}

fn quiver_code(e: &QuiverError) -> u8 {
    match e {
        QuiverError::Linalg(l) => linalg_code(l),
        _ => INVALID,
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError { code: linalg_code(&e), message: e.to_string() }
    }
}

impl From<QuiverError> for CliError {
    fn from(e: QuiverError) -> Self {
        CliError { code: quiver_code(&e), message: e.to_string() }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        let code = match &e {
            FamilyError::Limits(_) => LIMITS,
            FamilyError::Linalg(l) => linalg_code(l),
            FamilyError::Quiver(q) => quiver_code(q),
            _ => INVALID,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<ToricError> for CliError {
    fn from(e: ToricError) -> Self {
        let code = if matches!(e, ToricError::Limits(_)) { LIMITS } else { INVALID };
        CliError { code, message: e.to_string() }
    }
}

impl From<InvariantsError> for CliError {
    fn from(e: InvariantsError) -> Self {
        let code = if matches!(e, InvariantsError::GenusTooLarge(_)) { LIMITS } else { INVALID };
        CliError { code, message: e.to_string() }
    }
}

impl From<VortexError> for CliError {
    fn from(e: VortexError) -> Self {
        let code = if matches!(e, VortexError::Invalid(_)) { INVALID } else { LIMITS };
        CliError { code, message: e.to_string() }
    }
}

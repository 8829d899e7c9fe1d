//! Moment maps, stability tests and invariants for symplectic factorization problems.
//!
//! The crate is organised by problem family:
//!
//! * [`linalg`]: exact Gaussian-rational and float complex linear algebra;
//! * [`quiver`]: quiver problems, moment maps and the numerical Kempf–Ness flow;
//! * [`family`]: exact stability for flag chains and Strømme triples;
//! * [`toric`]: fans, the level cones `K(Σ)`/`K₀(Σ)` and abelian semistability;
//! * [`invariants`]: the integer exterior algebra and the abelian theta-class formula;
//! * [`vortex`]: a periodic spectral solver for the abelian vortex equation.

pub mod linalg;
pub mod family;
pub mod invariants;
pub mod lp;
pub mod quiver;
pub mod toric;
pub mod verdict;
pub mod vortex;

pub use linalg::{CMatrix, ExactMatrix, FloatMatrix, GaussRat, HermitianTuple, LinalgError, Mode};
pub use verdict::StabilityVerdict;

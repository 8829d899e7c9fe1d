//! Exact (Gaussian-rational) and floating complex linear algebra.
//!
//! Every routine that certifies a stability verdict runs in exact mode. Float mode is
//! reserved for spectral work (eigenvalues, singular values, matrix exponentials) and the
//! numerical flows built on it. [`CMatrix`] carries the mode flag; the operations named
//! `*_exact` reject float input with [`LinalgError::ModeMismatch`].

mod json;
mod matrix;
pub mod poly;
mod scalar;

use num_complex::Complex64;
use thiserror::Error;

pub use json::{rational_str, rational_vec};
pub(crate) use json::rational_from_value;
pub use matrix::{spectral_function, ExactMatrix, FloatMatrix, Matrix};
pub use scalar::{format_rational, parse_rational, rat, rat_int, rat_to_f64, Entry, GaussRat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("expected a {expected} matrix, got a {found} one")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("eigen-solver did not converge")]
    NoConvergence,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// A complex matrix in one of the two arithmetic modes.
#[derive(Clone, Debug, PartialEq)]
pub enum CMatrix {
    Exact(ExactMatrix),
    Float(FloatMatrix),
}

impl CMatrix {
    pub fn mode(&self) -> Mode {
        match self {
            CMatrix::Exact(_) => Mode::Exact,
            CMatrix::Float(_) => Mode::Float,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            CMatrix::Exact(m) => m.shape(),
            CMatrix::Float(m) => m.shape(),
        }
    }

    pub fn as_exact(&self) -> Result<&ExactMatrix, LinalgError> {
        match self {
            CMatrix::Exact(m) => Ok(m),
            CMatrix::Float(_) => Err(LinalgError::ModeMismatch { expected: Mode::Exact, found: Mode::Float }),
        }
    }

    pub fn as_float(&self) -> Result<&FloatMatrix, LinalgError> {
        match self {
            CMatrix::Float(m) => Ok(m),
            CMatrix::Exact(_) => Err(LinalgError::ModeMismatch { expected: Mode::Float, found: Mode::Exact }),
        }
    }

    /// Float view; exact entries are rounded.
    pub fn to_float(&self) -> FloatMatrix {
        match self {
            CMatrix::Exact(m) => m.to_float(),
            CMatrix::Float(m) => m.clone(),
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        match self {
            CMatrix::Exact(m) => CMatrix::Exact(m.adjoint()),
            CMatrix::Float(m) => CMatrix::Float(m.adjoint()),
        }
    }
}

impl From<ExactMatrix> for CMatrix {
    fn from(m: ExactMatrix) -> Self {
        CMatrix::Exact(m)
    }
}

impl From<FloatMatrix> for CMatrix {
    fn from(m: FloatMatrix) -> Self {
        CMatrix::Float(m)
    }
}

/// Rank over `Q(i)`.
pub fn rank_exact(a: &CMatrix) -> Result<usize, LinalgError> {
    Ok(a.as_exact()?.rank())
}

/// Exact basis of the null space; empty iff `a` is injective.
pub fn kernel_basis(a: &CMatrix) -> Result<Vec<Vec<GaussRat>>, LinalgError> {
    Ok(a.as_exact()?.kernel())
}

/// Ascending real eigenvalues and orthonormal eigenvectors (as columns) of a Hermitian
/// float matrix. `tol` bounds the accepted Hermitian defect relative to `1 + ‖H‖`.
pub fn hermitian_eigen(h: &CMatrix, tol: f64) -> Result<(Vec<f64>, FloatMatrix), LinalgError> {
    matrix::hermitian_eigen_float(h.as_float()?, tol)
}

/// An element of `⊕ Herm(V_i)`: one square block per symmetry factor.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianTuple {
    pub blocks: Vec<CMatrix>,
}

impl HermitianTuple {
    pub fn new(blocks: Vec<CMatrix>) -> Result<Self, LinalgError> {
        for b in &blocks {
            let ok = match b {
                CMatrix::Exact(m) => m.is_hermitian(),
                CMatrix::Float(m) => m.hermitian_defect() <= 1e-12 * m.norm().max(1.0),
            };
            if !ok {
                return Err(LinalgError::NotHermitian(b.to_float().hermitian_defect()));
            }
        }
        Ok(HermitianTuple { blocks })
    }

    /// Float blocks, rounding exact ones.
    pub fn to_float(&self) -> Vec<FloatMatrix> {
        self.blocks.iter().map(CMatrix::to_float).collect()
    }

    /// `Σ Tr(A_v B_v)`.
    pub fn pairing(&self, other: &HermitianTuple) -> f64 {
        self.to_float()
            .iter()
            .zip(other.to_float())
            .map(|(a, b)| a.mul(&b).map(|p| p.trace().re).unwrap_or(f64::NAN))
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.to_float().iter().map(FloatMatrix::norm_sqr).sum()
    }
}

/// Complex entry of a float matrix as `{"re": .., "im": ..}` numbers.
pub(crate) fn complex_json(z: &Complex64) -> serde_json::Value {
    serde_json::json!({ "re": z.re, "im": z.im })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spec_rank_examples() {
        let id = CMatrix::Exact(ExactMatrix::identity(2));
        assert_eq!(rank_exact(&id).unwrap(), 2);
        assert_eq!(rank_exact(&CMatrix::Exact(ExactMatrix::zeros(3, 2))).unwrap(), 0);
        let a = CMatrix::Exact(ExactMatrix::from_ints(3, 2, &[1, 0, 0, 1, 1, 1]));
        assert_eq!(rank_exact(&a).unwrap(), 2);
        let f = CMatrix::Float(FloatMatrix::identity(2));
        assert!(matches!(rank_exact(&f), Err(LinalgError::ModeMismatch { .. })));
    }

    #[test]
    fn spec_kernel_examples() {
        assert!(kernel_basis(&CMatrix::Exact(ExactMatrix::identity(3))).unwrap().is_empty());
        assert_eq!(kernel_basis(&CMatrix::Exact(ExactMatrix::zeros(2, 2))).unwrap().len(), 2);
        let k = kernel_basis(&CMatrix::Exact(ExactMatrix::from_ints(1, 2, &[1, 1]))).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], -k[0][1].clone());
        assert!(kernel_basis(&CMatrix::Float(FloatMatrix::zeros(1, 1))).is_err());
    }

    #[test]
    fn spec_eigen_examples() {
        let d = CMatrix::Float(FloatMatrix::from_reals(2, 2, &[1.0, 0.0, 0.0, 2.0]));
        let (vals, vecs) = hermitian_eigen(&d, 1e-12).unwrap();
        assert_eq!(vals, vec![1.0, 2.0]);
        assert!((vecs.get(0, 0).norm() - 1.0).abs() < 1e-14);
        assert!(vecs.get(1, 0).norm() < 1e-14);

        let x = CMatrix::Float(FloatMatrix::from_reals(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let (vals, _) = hermitian_eigen(&x, 1e-12).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);

        let (vals, _) = hermitian_eigen(&CMatrix::Float(FloatMatrix::zeros(3, 3)), 1e-12).unwrap();
        assert!(vals.iter().all(|&v| v == 0.0));

        let bad = CMatrix::Float(FloatMatrix::from_reals(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        assert!(matches!(hermitian_eigen(&bad, 1e-12), Err(LinalgError::NotHermitian(_))));
        let exact = CMatrix::Exact(ExactMatrix::identity(2));
        assert!(matches!(hermitian_eigen(&exact, 1e-12), Err(LinalgError::ModeMismatch { .. })));
    }

    #[test]
    fn hermitian_tuple_rejects_non_hermitian_blocks() {
        let ok = HermitianTuple::new(vec![CMatrix::Exact(ExactMatrix::identity(2))]);
        assert!(ok.is_ok());
        let bad = HermitianTuple::new(vec![CMatrix::Exact(ExactMatrix::from_ints(2, 2, &[0, 1, 0, 0]))]);
        assert!(bad.is_err());
    }

    fn int_matrix() -> impl Strategy<Value = ExactMatrix> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            prop::collection::vec(-5i64..=5, r * c).prop_map(move |v| ExactMatrix::from_ints(r, c, &v))
        })
    }

    fn complex_matrix() -> impl Strategy<Value = ExactMatrix> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
            prop::collection::vec((-3i64..=3, -3i64..=3), r * c).prop_map(move |v| {
                let data = v.into_iter().map(|(a, b)| GaussRat::from_ints(a, b)).collect();
                ExactMatrix::new(r, c, data).unwrap()
            })
        })
    }

    fn hermitian_float() -> impl Strategy<Value = FloatMatrix> {
        (1usize..=5).prop_flat_map(|n| {
            prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n).prop_map(move |v| {
                let a = FloatMatrix::new(n, n, v.into_iter().map(|(x, y)| Complex64::new(x, y)).collect()).unwrap();
                a.add(&a.adjoint()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_is_adjoint_invariant(a in complex_matrix()) {
            prop_assert_eq!(a.rank(), a.adjoint().rank());
        }

        #[test]
        fn rank_nullity(a in complex_matrix()) {
            let k = a.kernel();
            prop_assert_eq!(a.cols() - a.rank(), k.len());
            for v in &k {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(num_traits::Zero::is_zero));
            }
        }

        #[test]
        fn exact_rank_agrees_with_float_rank(a in int_matrix()) {
            prop_assert_eq!(a.rank(), a.to_float().float_rank(1e-9));
        }

        #[test]
        fn eigen_reconstruction(h in hermitian_float()) {
            let tol = 1e-12;
            let (vals, vecs) = hermitian_eigen(&CMatrix::Float(h.clone()), tol).unwrap();
            prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            let rebuilt = spectral_function(&vals, &vecs, |l| l);
            let scale = h.norm().max(1e-300);
            prop_assert!(rebuilt.sub(&h).unwrap().norm() <= 10.0 * tol * scale + 1e-300);
            let gram = vecs.adjoint().mul(&vecs).unwrap();
            prop_assert!(gram.sub(&FloatMatrix::identity(h.rows())).unwrap().norm() <= 10.0 * tol * h.rows() as f64);
        }
    }
}

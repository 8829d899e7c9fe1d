use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ToricError;
use crate::linalg::{ExactMatrix, GaussRat};

/// An integer `m × r` matrix of full row rank; column `j` is the ray generator `v_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct ToricMatrix {
    rows: Vec<Vec<i64>>,
    r: usize,
    coker: Vec<Vec<i64>>,
}

impl ToricMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, ToricError> {
        let r = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || r == 0 {
            return Err(ToricError::Invalid("toric matrix must be nonempty".into()));
        }
        if rows.iter().any(|row| row.len() != r) {
            return Err(ToricError::Invalid("ragged toric matrix".into()));
        }
        let ex = ExactMatrix::from_ints(rows.len(), r, &rows.concat());
        if ex.rank() != rows.len() {
            return Err(ToricError::Invalid(format!("toric matrix has rank {} < {}", ex.rank(), rows.len())));
        }
        let coker = ex.kernel().into_iter().map(|k| primitive_integer(&k)).collect();
        Ok(ToricMatrix { rows, r, coker })
    }

    /// `m`, the dimension of the ambient lattice.
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// `r`, the number of rays.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.rows.iter().map(|row| row[j]).collect()
    }

    pub fn to_exact(&self) -> ExactMatrix {
        ExactMatrix::from_ints(self.m(), self.r, &self.rows.concat())
    }

    /// Columns `j ∈ idx` as an `m × |idx|` exact matrix.
    pub fn generators(&self, idx: &[usize]) -> ExactMatrix {
        ExactMatrix::from_fn(self.m(), idx.len(), |i, k| GaussRat::from_int(self.rows[i][idx[k]]))
    }

    /// Primitive integer basis `B` of `ker v`, one vector per entry. The coordinates of a
    /// level class `p_v(a) ∈ ℝ^r / im(vᵀ)` are `Bᵀ a`.
    pub fn coker_basis(&self) -> &[Vec<i64>] {
        &self.coker
    }

    /// Coordinates of `p_v(a)` in the fixed cokernel basis.
    pub fn p_v(&self, a: &[BigRational]) -> Vec<BigRational> {
        self.coker
            .iter()
            .map(|b| b.iter().zip(a).map(|(&bj, aj)| aj * BigRational::from_integer(bj.into())).sum())
            .collect()
    }

    /// `a + vᵀ y`.
    pub fn shift(&self, a: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        (0..self.r)
            .map(|j| {
                let s: BigRational = (0..self.m()).map(|i| &y[i] * BigRational::from_integer(self.rows[i][j].into())).sum();
                &a[j] + s
            })
            .collect()
    }
}

impl TryFrom<Vec<Vec<i64>>> for ToricMatrix {
    type Error = ToricError;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, ToricError> {
        ToricMatrix::new(rows)
    }
}

impl From<ToricMatrix> for Vec<Vec<i64>> {
    fn from(v: ToricMatrix) -> Self {
        v.rows
    }
}

/// Clears denominators of a real rational vector and divides by the content.
fn primitive_integer(v: &[GaussRat]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.re.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (&x.re * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(1, |x| if x.is_negative() { -1 } else { 1 });
    ints.iter()
        .map(|x| {
            let q = x / &g * sign;
            i64::try_from(q).expect("cokernel basis entry exceeds i64")
        })
        .collect()
}

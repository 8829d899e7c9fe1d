use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{Entry, GaussRat};
use super::LinalgError;

/// Dense row-major matrix over an [`Entry`] type.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ExactMatrix = Matrix<GaussRat>;
pub type FloatMatrix = Matrix<Complex64>;

impl<T: Entry> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        if self.cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.data.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, LinalgError> {
        if self.cols != o.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a.clone() * b.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::Shape("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * x[k].clone())
            })
            .collect())
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self, LinalgError> {
        if self.shape() != o.shape() {
            return Err(LinalgError::Shape(format!("{:?} vs {:?}", self.shape(), o.shape())));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self, LinalgError> {
        self.zip(o, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, o: &Self) -> Result<Self, LinalgError> {
        self.zip(o, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|a| a.clone() * s.clone())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// `[self | o]`.
    pub fn hstack(&self, o: &Self) -> Result<Self, LinalgError> {
        if self.rows != o.rows {
            return Err(LinalgError::Shape("hstack row mismatch".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        }))
    }

    /// Traces out the second factor of `C^outer ⊗ C^inner`; rows and columns are indexed
    /// `(i, k) -> i * inner + k`.
    pub fn partial_trace_inner(&self, inner: usize) -> Result<Self, LinalgError> {
        if !self.is_square() || inner == 0 || !self.rows.is_multiple_of(inner) {
            return Err(LinalgError::Shape(format!(
                "partial trace over dimension {inner} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let outer = self.rows / inner;
        Ok(Self::from_fn(outer, outer, |i, j| {
            (0..inner).fold(T::zero(), |acc, k| acc + self.get(i * inner + k, j * inner + k).clone())
        }))
    }

    /// `A ⊗ Id_inner` with the same index convention as [`Self::partial_trace_inner`].
    pub fn kron_identity(&self, inner: usize) -> Self {
        Self::from_fn(self.rows * inner, self.cols * inner, |i, j| {
            if i % inner == j % inner {
                self.get(i / inner, j / inner).clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

// ---------------------------------------------------------------------------
// exact mode

impl ExactMatrix {
    pub fn from_ints(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols, "from_ints: wrong entry count");
        Matrix { rows, cols, data: vals.iter().map(|&v| GaussRat::from_int(v)).collect() }
    }

    pub fn from_rationals(rows: usize, cols: usize, vals: &[BigRational]) -> Self {
        assert_eq!(vals.len(), rows * cols, "from_rationals: wrong entry count");
        Matrix { rows, cols, data: vals.iter().cloned().map(GaussRat::real).collect() }
    }

    /// Reduced row echelon form with first-nonzero pivoting, plus the pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in col..m.cols {
                    let sub = &factor * m.get(row, j);
                    if sub.is_zero() {
                        continue;
                    }
                    let v = m.get(r, j) - &sub;
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column of the echelon form.
    pub fn kernel(&self) -> Vec<Vec<GaussRat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![GaussRat::zero(); self.cols];
                v[f] = GaussRat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    /// Columns of `self` forming a basis of its column space.
    pub fn column_space(&self) -> ExactMatrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    pub fn inverse(&self) -> Result<ExactMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&ExactMatrix::identity(n))?.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        Ok(ExactMatrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[GaussRat]) -> Result<Vec<GaussRat>, LinalgError> {
        self.inverse()?.mul_vec(b)
    }

    pub fn determinant(&self) -> Result<GaussRat, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Shape("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = GaussRat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(GaussRat::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m.get(col, col).clone();
            det = &det * &piv;
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) / &piv;
                for j in col..n {
                    let v = m.get(r, j) - &(&factor * m.get(col, j));
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Orthogonal projector onto the column space (Hermitian, idempotent).
    pub fn projector_onto_columns(&self) -> Result<ExactMatrix, LinalgError> {
        let basis = self.column_space();
        if basis.cols == 0 {
            return Ok(ExactMatrix::zeros(self.rows, self.rows));
        }
        let gram = basis.adjoint().mul(&basis)?;
        basis.mul(&gram.inverse()?)?.mul(&basis.adjoint())
    }

    pub fn to_float(&self) -> FloatMatrix {
        self.map(GaussRat::to_complex)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }
}

// ---------------------------------------------------------------------------
// float mode

impl FloatMatrix {
    pub fn from_reals(rows: usize, cols: usize, vals: &[f64]) -> Self {
        assert_eq!(vals.len(), rows * cols, "from_reals: wrong entry count");
        Matrix { rows, cols, data: vals.iter().map(|&v| Complex64::new(v, 0.0)).collect() }
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Frobenius distance to the adjoint.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.sub(&self.adjoint()).map(|d| d.norm()).unwrap_or(f64::INFINITY)
    }

    /// `exp(s * H)` for Hermitian `H`, via the spectral decomposition.
    pub fn hermitian_exp(&self, s: f64) -> Result<FloatMatrix, LinalgError> {
        let (vals, vecs) = hermitian_eigen_float(self, 1e-9)?;
        Ok(spectral_function(&vals, &vecs, |l| (s * l).exp()))
    }

    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let mut sv: Vec<f64> = self.to_nalgebra().singular_values().iter().copied().collect();
        sv.sort_by(f64::total_cmp);
        sv
    }

    /// Number of singular values above `threshold`.
    pub fn float_rank(&self, threshold: f64) -> usize {
        self.singular_values().into_iter().filter(|&s| s > threshold).count()
    }
}

/// Rebuilds `V diag(f(λ)) V†`.
pub fn spectral_function(vals: &[f64], vecs: &FloatMatrix, f: impl Fn(f64) -> f64) -> FloatMatrix {
    let n = vals.len();
    FloatMatrix::from_fn(n, n, |i, j| {
        (0..n).fold(Complex64::zero(), |acc, k| {
            acc + *vecs.get(i, k) * f(vals[k]) * vecs.get(j, k).conj()
        })
    })
}

pub(crate) fn hermitian_eigen_float(
    h: &FloatMatrix,
    tol: f64,
) -> Result<(Vec<f64>, FloatMatrix), LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::Shape("eigen-decomposition of a non-square matrix".into()));
    }
    let n = h.rows;
    if n == 0 {
        return Ok((Vec::new(), FloatMatrix::zeros(0, 0)));
    }
    let scale = h.norm();
    if h.hermitian_defect() > tol * (1.0 + scale) {
        return Err(LinalgError::NotHermitian(h.hermitian_defect()));
    }
    // symmetrize so the solver sees an exactly Hermitian input
    let sym = h.add(&h.adjoint())?.scale(&Complex64::new(0.5, 0.0));
    let eig = nalgebra::linalg::SymmetricEigen::try_new(sym.to_nalgebra(), f64::EPSILON, 10_000)
        .ok_or(LinalgError::NoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = FloatMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((vals, vecs))
}

//! Univariate polynomials over `Q(i)` and fraction-free elimination on polynomial matrices.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::matrix::ExactMatrix;
use super::scalar::GaussRat;

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<GaussRat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: GaussRat) -> Self {
        Poly::new(vec![c])
    }

    /// `a + b x`.
    pub fn linear(a: GaussRat, b: GaussRat) -> Self {
        Poly::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> GaussRat {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &GaussRat) -> GaussRat {
        self.coeffs.iter().rev().fold(GaussRat::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn scale(&self, s: &GaussRat) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return (Poly::zero(), self.clone());
        };
        let mut quot = vec![GaussRat::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * dc);
            }
            quot[k] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Pseudo-remainder `prem(self, d) = lc(d)^(deg self - deg d + 1) self mod d`.
    pub fn pseudo_rem(&self, d: &Poly) -> Poly {
        let (Some(n), Some(m)) = (self.degree(), d.degree()) else {
            return self.clone();
        };
        if n < m {
            return self.clone();
        }
        let factor = pow(&d.leading(), n - m + 1);
        self.scale(&factor).div_rem(d).1
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }
}

fn pow(c: &GaussRat, e: usize) -> GaussRat {
    (0..e).fold(GaussRat::one(), |acc, _| &acc * c)
}

/// Monic gcd via the subresultant polynomial remainder sequence. `gcd(0, 0) = 0`.
pub fn subresultant_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = if a.degree() >= b.degree() { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    if b.is_zero() {
        return a.monic();
    }
    let mut g = GaussRat::one();
    let mut h = GaussRat::one();
    loop {
        let delta = a.degree().unwrap() - b.degree().unwrap();
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return b.monic();
        }
        if r.degree() == Some(0) {
            return Poly::one();
        }
        let denom = &g * &pow(&h, delta);
        a = b;
        b = r.scale(&denom.inv().expect("subresultant scale is nonzero"));
        g = a.leading();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            &pow(&g, delta) / &pow(&h, delta - 1)
        };
    }
}

/// gcd of a list, skipping zero polynomials.
pub fn gcd_all<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> Poly {
    polys.into_iter().fold(Poly::zero(), |acc, p| subresultant_gcd(&acc, p))
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(GaussRat::one())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = GaussRat::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + o.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GaussRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

/// A matrix over `Q(i)[x]`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, data }
    }

    /// `x * a + b` entrywise.
    pub fn pencil(a: &ExactMatrix, b: &ExactMatrix) -> Self {
        assert_eq!(a.shape(), b.shape(), "pencil operands must have equal shapes");
        PolyMatrix::from_fn(a.rows(), a.cols(), |i, j| Poly::linear(b.get(i, j).clone(), a.get(i, j).clone()))
    }

    pub fn constant(a: &ExactMatrix) -> Self {
        PolyMatrix::from_fn(a.rows(), a.cols(), |i, j| Poly::constant(a.get(i, j).clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn hstack(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.rows, o.rows, "hstack row mismatch");
        PolyMatrix::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// Bareiss elimination with column skipping. Returns the number of pivots (the rank
    /// over `Q(i)(x)`) and, for square input, the determinant.
    fn bareiss(&self) -> (usize, Option<Poly>) {
        let mut m = self.clone();
        let mut prev = Poly::one();
        let mut sign = GaussRat::one();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                m.swap_rows(p, row);
                sign = -sign;
            }
            let piv = m.get(row, col).clone();
            for r in row + 1..m.rows {
                let lead = m.get(r, col).clone();
                for j in col + 1..m.cols {
                    let num = &(&piv * m.get(r, j)) - &(&lead * m.get(row, j));
                    let q = num.exact_div(&prev).expect("Bareiss step divides exactly");
                    m.set(r, j, q);
                }
                m.set(r, col, Poly::zero());
            }
            prev = piv;
            row += 1;
        }
        let det = (self.rows == self.cols).then(|| {
            if row < self.rows {
                Poly::zero()
            } else if self.rows == 0 {
                Poly::one()
            } else {
                prev.scale(&sign)
            }
        });
        (row, det)
    }

    pub fn rank(&self) -> usize {
        self.bareiss().0
    }

    pub fn determinant(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square polynomial matrix");
        self.bareiss().1.expect("square")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| GaussRat::from_int(v)).collect())
    }

    #[test]
    fn gcd_of_products() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = &p(&[-1, 1]) * &p(&[2, 1]);
        let b = &p(&[-1, 1]) * &p(&[-3, 1]);
        assert_eq!(subresultant_gcd(&a, &b), p(&[-1, 1]));
        assert_eq!(subresultant_gcd(&p(&[1, 1]), &p(&[2, 1])), Poly::one());
        assert_eq!(subresultant_gcd(&Poly::zero(), &p(&[0, 2])), p(&[0, 1]));
        assert!(subresultant_gcd(&Poly::zero(), &Poly::zero()).is_zero());
    }

    #[test]
    fn gcd_over_gaussian_rationals() {
        // x^2 + 1 = (x - i)(x + i); shares x - i with x^2 - 2ix - 1 = (x - i)^2
        let x2p1 = p(&[1, 0, 1]);
        let sq = Poly::new(vec![GaussRat::from_int(-1), GaussRat::from_ints(0, -2), GaussRat::from_int(1)]);
        let g = subresultant_gcd(&x2p1, &sq);
        assert_eq!(g, Poly::new(vec![GaussRat::from_ints(0, -1), GaussRat::from_int(1)]));
    }

    #[test]
    fn pencil_determinant() {
        // [[x, 1], [1, x]] has determinant x^2 - 1
        let a = ExactMatrix::identity(2);
        let b = ExactMatrix::from_ints(2, 2, &[0, 1, 1, 0]);
        let m = PolyMatrix::pencil(&a, &b);
        assert_eq!(m.determinant(), p(&[-1, 0, 1]));
        assert_eq!(m.rank(), 2);
        let z = PolyMatrix::pencil(&ExactMatrix::zeros(2, 1), &ExactMatrix::zeros(2, 1));
        assert_eq!(z.rank(), 0);
    }

    proptest! {
        #[test]
        fn gcd_divides_both(a in prop::collection::vec(-4i64..=4, 0..5),
                            b in prop::collection::vec(-4i64..=4, 0..5),
                            c in prop::collection::vec(-3i64..=3, 1..3)) {
            let (a, b, c) = (p(&a), p(&b), p(&c));
            let (ac, bc) = (&a * &c, &b * &c);
            let g = subresultant_gcd(&ac, &bc);
            if !g.is_zero() {
                prop_assert!(ac.exact_div(&g).is_some());
                prop_assert!(bc.exact_div(&g).is_some());
                if !c.is_zero() && !(ac.is_zero() && bc.is_zero()) {
                    prop_assert!(g.exact_div(&c.monic()).is_some());
                }
            }
        }

        #[test]
        fn bareiss_determinant_matches_pointwise(v in prop::collection::vec(-2i64..=2, 18)) {
            let a = ExactMatrix::from_ints(3, 3, &v[..9]);
            let b = ExactMatrix::from_ints(3, 3, &v[9..]);
            let det = PolyMatrix::pencil(&a, &b).determinant();
            for x in -2i64..=2 {
                let xv = GaussRat::from_int(x);
                let point = a.scale(&xv).add(&b).unwrap();
                prop_assert_eq!(det.eval(&xv), point.determinant().unwrap());
            }
        }
    }
}

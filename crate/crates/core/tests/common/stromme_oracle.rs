//! Exhaustive enumeration of small integer Strømme triples and an evaluation-based oracle
//! for the two non-degeneracy conditions, sharing no code with the library's polynomial
//! matrix routines.
//!
//! Both conditions are invariant under permuting and negating the basis vectors of `U`,
//! `V` and `W` and under exchanging `k` and `l` (the swap `x ↔ y` on `ℙ¹`), so one triple
//! per orbit is enough.

#![allow(dead_code)]

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use sfpas_core::family::StrommeTriple;

/// Every `(u, v, w)` with `u ≤ 2`, `v ≤ 3`, `w ≤ 2` and `u ≤ v ≤ u + w`.
pub fn shapes() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for u in 0..=2 {
        for w in 0..=2 {
            for v in u..=(u + w).min(3) {
                out.push((u, v, w));
            }
        }
    }
    out
}

pub type IntMatrix = Vec<Vec<i64>>;

/// Integer data of a triple stored column by column: the `u` columns of `U` as
/// `(k e_j, l e_j)` stacked vectors of length `2v`, then the `w` columns of `m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cols {
    pub u_cols: Vec<Vec<i8>>,
    pub m_cols: Vec<Vec<i8>>,
}

impl Cols {
    pub fn triple(&self, u: usize, v: usize, w: usize) -> StrommeTriple {
        let entry = |c: &Vec<i8>, i: usize| i64::from(c[i]);
        let k: Vec<i64> = (0..v).flat_map(|i| self.u_cols.iter().map(move |c| entry(c, i))).collect();
        let l: Vec<i64> = (0..v).flat_map(|i| self.u_cols.iter().map(move |c| entry(c, v + i))).collect();
        let m: Vec<i64> = (0..v).flat_map(|i| self.m_cols.iter().map(move |c| entry(c, i))).collect();
        StrommeTriple::from_ints(u, v, w, &k, &l, &m).expect("shape is admissible")
    }

    /// `k[i][j]`, `l[i][j]` and `m[i][j]` as plain integers.
    pub fn matrices(&self, v: usize) -> [IntMatrix; 3] {
        let rows = |cols: &[Vec<i8>], off: usize| -> IntMatrix {
            (0..v).map(|i| cols.iter().map(|c| i64::from(c[off + i])).collect()).collect()
        };
        [rows(&self.u_cols, 0), rows(&self.u_cols, v), rows(&self.m_cols, 0)]
    }
}

/// Sign so that the first nonzero entry is positive.
fn normalize(c: &mut [i8]) {
    if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        c.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Sorted, so that multisets drawn in index order are sorted too.
fn normalized_vectors(len: usize) -> Vec<Vec<i8>> {
    (0..3usize.pow(len as u32))
        .map(|mut n| {
            (0..len)
                .map(|_| {
                    let d = (n % 3) as i8 - 1;
                    n /= 3;
                    d
                })
                .collect::<Vec<i8>>()
        })
        .filter(|c| c.iter().find(|&&x| x != 0).is_none_or(|&x| x > 0))
        .sorted()
        .collect()
}

fn multisets(pool: &[Vec<i8>], k: usize) -> Vec<Vec<Vec<i8>>> {
    (0..pool.len()).combinations_with_replacement(k).map(|idx| idx.into_iter().map(|i| pool[i].clone()).collect()).collect()
}

/// Applies a signed row permutation of `V` (and optionally the `k ↔ l` swap), then
/// brings the columns back to normal form.
fn transform(c: &Cols, v: usize, perm: &[usize], signs: &[i8], swap: bool) -> Cols {
    let act = |col: &[i8], off: usize, out: &mut Vec<i8>| {
        for i in 0..v {
            out.push(signs[i] * col[off + perm[i]]);
        }
    };
    let mut u_cols: Vec<Vec<i8>> = c
        .u_cols
        .iter()
        .map(|col| {
            let mut out = Vec::with_capacity(2 * v);
            let (first, second) = if swap { (v, 0) } else { (0, v) };
            act(col, first, &mut out);
            act(col, second, &mut out);
            normalize(&mut out);
            out
        })
        .collect();
    let mut m_cols: Vec<Vec<i8>> = c
        .m_cols
        .iter()
        .map(|col| {
            let mut out = Vec::with_capacity(v);
            act(col, 0, &mut out);
            normalize(&mut out);
            out
        })
        .collect();
    u_cols.sort();
    m_cols.sort();
    Cols { u_cols, m_cols }
}

/// One representative per orbit of integer triples with entries in `{−1, 0, 1}`, passed
/// to `visit` together with the orbit size.
pub fn for_each_orbit(u: usize, v: usize, w: usize, mut visit: impl FnMut(&Cols, usize)) {
    let row_moves: Vec<(Vec<usize>, Vec<i8>, bool)> = (0..v)
        .permutations(v)
        .cartesian_product((0..1usize << v).map(|mask| (0..v).map(|i| if mask >> i & 1 == 1 { -1i8 } else { 1 }).collect::<Vec<_>>()))
        .cartesian_product([false, true])
        .map(|((p, s), sw)| (p, s, sw))
        .collect();
    let u_pool = normalized_vectors(2 * v);
    let m_pool = normalized_vectors(v);
    let u_sets = multisets(&u_pool, u);
    let m_sets = multisets(&m_pool, w);
    for us in &u_sets {
        for ms in &m_sets {
            let c = Cols { u_cols: us.clone(), m_cols: ms.clone() };
            let mut stabilizer = 0;
            let mut canonical = true;
            for (p, s, sw) in &row_moves {
                let t = transform(&c, v, p, s, *sw);
                match t.cmp(&c) {
                    std::cmp::Ordering::Less => {
                        canonical = false;
                        break;
                    }
                    std::cmp::Ordering::Equal => stabilizer += 1,
                    std::cmp::Ordering::Greater => {}
                }
            }
            if canonical {
                visit(&c, orbit_size(&c, row_moves.len(), stabilizer));
            }
        }
    }
}

/// Number of raw triples in the orbit of a representative.
fn orbit_size(c: &Cols, row_group: usize, row_stabilizer: usize) -> usize {
    // columns in normal form stand for 2^(nonzero columns) sign choices times the
    // distinct orderings of the multiset; the row moves are counted by orbit–stabilizer
    let column_count = |cols: &[Vec<i8>]| -> usize {
        let signs = cols.iter().filter(|col| col.iter().any(|&x| x != 0)).count();
        let mut orderings = factorial(cols.len());
        for (_, group) in &cols.iter().chunk_by(|col| *col) {
            orderings /= factorial(group.count());
        }
        (1 << signs) * orderings
    };
    column_count(&c.u_cols) * column_count(&c.m_cols) * row_group / row_stabilizer
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Number of integer triples of shape `(u, v, w)` with entries in `{−1, 0, 1}`.
pub fn raw_count(u: usize, v: usize, w: usize) -> usize {
    3usize.pow((2 * u * v + v * w) as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub cond1: bool,
    pub cond2: bool,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Rank of an integer matrix by fraction-free elimination in `i128`.
pub fn int_rank(rows: &[Vec<i128>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            let (f, g) = (a[r][col], a[rank][col]);
            let pivot = a[rank].clone();
            for (x, y) in a[r].iter_mut().zip(&pivot) {
                *x = *x * g - y * f;
            }
            let d = a[r].iter().fold(0i128, |d, &x| gcd(d, x));
            if d > 1 {
                a[r].iter_mut().for_each(|x| *x /= d);
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Determinant by cofactor expansion along the first row.
pub fn int_det(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = a[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * a[0][j] * int_det(&minor)
        })
        .sum()
}

/// `[x k + y l | m]` at an integer point.
fn augmented(k: &[Vec<i64>], l: &[Vec<i64>], m: &[Vec<i64>], x: i64, y: i64) -> Vec<Vec<i128>> {
    (0..k.len())
        .map(|i| {
            let pencil = k[i].iter().zip(&l[i]).map(|(&a, &b)| i128::from(x * a + y * b));
            pencil.chain(m[i].iter().map(|&c| i128::from(c))).collect()
        })
        .collect()
}

/// Coefficients (lowest degree first) of the polynomial of degree `≤ n` through
/// `(i, values[i])`, `i = 0..=n`.
fn interpolate(values: &[i128]) -> Vec<BigRational> {
    let n = values.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for (i, &yi) in values.iter().enumerate() {
        // basis polynomial ∏_{j≠i} (x − j)/(i − j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in (0..n).filter(|&j| j != i) {
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * q(j as i64);
            }
            basis = next;
            denom *= q(i as i64 - j as i64);
        }
        let scale = BigRational::from_integer(yi.into()) / denom;
        for (d, c) in basis.iter().enumerate() {
            coeffs[d] += c * &scale;
        }
    }
    trim(coeffs)
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Remainder of `a` modulo `b` over `ℚ` (`b` nonzero).
fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let f = r.last().expect("nonempty").clone() / &lead;
        let shift = r.len() - b.len();
        for (d, c) in b.iter().enumerate() {
            r[shift + d] -= &f * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn euclid(a: Vec<BigRational>, b: Vec<BigRational>) -> Vec<BigRational> {
    if b.is_empty() { a } else { euclid(b.clone(), rem(&a, &b)) }
}

/// `cond1` from ranks at 50 points of `ℙ¹`, `cond2` from interpolated minors, a
/// Euclidean gcd and the value at infinity.
pub fn oracle(c: &Cols, u: usize, v: usize, w: usize) -> OracleVerdict {
    let [k, l, m] = c.matrices(v);
    let points: Vec<(i64, i64)> = std::iter::once((1, 0)).chain((0..49).map(|i| (i - 24, 1))).collect();
    let pencil_rank = |x: i64, y: i64| -> usize {
        let a: Vec<Vec<i128>> = (0..v).map(|i| (0..u).map(|j| i128::from(x * k[i][j] + y * l[i][j])).collect()).collect();
        int_rank(&a)
    };
    // a nonzero u × u minor has degree u ≤ 2, so it survives at one of 50 points
    let cond1 = points.iter().any(|&(x, y)| pencil_rank(x, y) == u);

    let mut gcd_poly: Option<Vec<BigRational>> = None;
    let mut any_nonzero = false;
    let mut nonzero_at_infinity = false;
    for cols in (0..u + w).combinations(v) {
        let e = cols.iter().filter(|&&j| j < u).count();
        let minor_at = |x: i64, y: i64| -> i128 {
            let full = augmented(&k, &l, &m, x, y);
            let sub: Vec<Vec<i128>> = full.iter().map(|row| cols.iter().map(|&j| row[j]).collect()).collect();
            int_det(&sub)
        };
        let values: Vec<i128> = (0..=e as i64).map(|x| minor_at(x, 1)).collect();
        let poly = interpolate(&values);
        let at_infinity = minor_at(1, 0);
        let top = poly.get(e).cloned().unwrap_or_else(BigRational::zero);
        assert_eq!(top, q(at_infinity as i64), "interpolation disagrees with the value at infinity");
        if poly.is_empty() {
            continue;
        }
        any_nonzero = true;
        nonzero_at_infinity |= at_infinity != 0;
        gcd_poly = Some(match gcd_poly {
            None => poly,
            Some(g) => euclid(g, poly),
        });
    }
    let finite_common_zero = gcd_poly.as_ref().is_some_and(|g| g.len() > 1);
    let cond2 = any_nonzero && nonzero_at_infinity && !finite_common_zero;

    // a point where the augmented matrix drops rank is a common zero of all minors
    if cond2 {
        for &(x, y) in &points {
            assert_eq!(int_rank(&augmented(&k, &l, &m, x, y)), v, "rank drop at ({x}, {y}) contradicts a constant gcd");
        }
    }
    OracleVerdict { cond1, cond2 }
}

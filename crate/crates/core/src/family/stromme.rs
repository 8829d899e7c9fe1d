use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EpsRational, FamilyError};
use crate::linalg::poly::{subresultant_gcd, Poly, PolyMatrix};
use crate::linalg::{ExactMatrix, GaussRat};
use crate::quiver::{Level, Quiver, QuiverDims, QuiverPoint, QuiverProblem, SymmetrySpec};

/// Largest `v = dim V` accepted by [`stromme_check`].
pub const MAX_STROMME_V: usize = 8;

/// Maps `k, l: U → V` and `m: W → V` with `dim V = dim U + r`, `r ≤ dim W`.
#[derive(Clone, Debug, PartialEq)]
pub struct StrommeTriple {
    u: usize,
    v: usize,
    w: usize,
    k: ExactMatrix,
    l: ExactMatrix,
    m: ExactMatrix,
}

impl StrommeTriple {
    pub fn new(
        u: usize,
        v: usize,
        w: usize,
        k: ExactMatrix,
        l: ExactMatrix,
        m: ExactMatrix,
    ) -> Result<Self, FamilyError> {
        if v < u || v - u > w {
            return Err(FamilyError::Dimension(format!("need u ≤ v ≤ u + w, got u={u}, v={v}, w={w}")));
        }
        for (name, mat, shape) in [("k", &k, (v, u)), ("l", &l, (v, u)), ("m", &m, (v, w))] {
            if mat.shape() != shape {
                return Err(FamilyError::Dimension(format!("{name} is {:?}, expected {shape:?}", mat.shape())));
            }
        }
        Ok(StrommeTriple { u, v, w, k, l, m })
    }

    /// Integer-entry convenience constructor; entries are row-major.
    pub fn from_ints(u: usize, v: usize, w: usize, k: &[i64], l: &[i64], m: &[i64]) -> Result<Self, FamilyError> {
        StrommeTriple::new(
            u,
            v,
            w,
            ExactMatrix::from_ints(v, u, k),
            ExactMatrix::from_ints(v, u, l),
            ExactMatrix::from_ints(v, w, m),
        )
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.u, self.v, self.w)
    }

    pub fn r(&self) -> usize {
        self.v - self.u
    }

    pub fn k(&self) -> &ExactMatrix {
        &self.k
    }

    pub fn l(&self) -> &ExactMatrix {
        &self.l
    }

    pub fn m(&self) -> &ExactMatrix {
        &self.m
    }

    /// The quiver `U ⇉ V ← W` with symmetry `U(U) × U(V)` and level `(t, −s)`, so the
    /// moment map is `(½(k†k + l†l) − t, −½(kk† + ll† + mm†) + s)`. Needs `u, v, w ≥ 1`.
    pub fn to_quiver(&self, s: &BigRational, t: &BigRational) -> Result<(QuiverProblem, QuiverPoint, Level), FamilyError> {
        let quiver = Quiver::new(vec!["U", "V", "W"], vec![("k", "U", "V"), ("l", "U", "V"), ("m", "W", "V")])?;
        let dims = QuiverDims::untwisted(&quiver, vec![self.u, self.v, self.w]);
        let prob = QuiverProblem::new(quiver, dims, SymmetrySpec::FullVertexProduct(vec![0, 1]))?;
        let point = QuiverPoint::from_exact(vec![self.k.clone(), self.l.clone(), self.m.clone()]);
        Ok((prob, point, Level::Vertex(vec![t.clone(), -s.clone()])))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrommeCheck {
    pub cond1: bool,
    pub cond2: bool,
    pub is_triple: bool,
}

/// The two non-degeneracy conditions.
///
/// `cond1`: the pencil `x k + l` has rank `u` over `Q(i)(x)` (the generic rank of
/// `x k + y l`). `cond2`: the `v × v` minors of `[x k + y l | m]` have no common zero on
/// `ℙ¹`. A minor using `e` pencil columns is a binary form of degree `e`; after setting
/// `y = 1` the point at infinity is a common zero iff every nonzero minor drops degree, and
/// finite common zeros are detected by the gcd of the dehomogenised minors.
pub fn stromme_check(t: &StrommeTriple) -> Result<StrommeCheck, FamilyError> {
    if t.v > MAX_STROMME_V {
        return Err(FamilyError::Limits(format!("v = {} exceeds {MAX_STROMME_V}", t.v)));
    }
    let pencil = PolyMatrix::pencil(&t.k, &t.l);
    let cond1 = pencil.rank() == t.u;
    let full = pencil.hstack(&PolyMatrix::constant(&t.m));
    let mut gcd: Option<Poly> = None;
    let mut infinity_avoided = false;
    let mut cond2 = false;
    for cols in (0..t.u + t.w).combinations(t.v) {
        let minor = full.select_columns(&cols).determinant();
        if minor.is_zero() {
            continue;
        }
        let e = cols.iter().filter(|&&c| c < t.u).count();
        infinity_avoided |= minor.degree() == Some(e);
        let g = match gcd.take() {
            None => minor.monic(),
            Some(g) => subresultant_gcd(&g, &minor),
        };
        let constant = g.degree() == Some(0);
        gcd = Some(g);
        if constant && infinity_avoided {
            cond2 = true;
            break;
        }
    }
    Ok(StrommeCheck { cond1, cond2, is_triple: cond1 && cond2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// `(U₁, V₁) ≠ (0, 0)`, `k(U₁) + l(U₁) ⊂ V₁` but `s dim V₁ ≤ t dim U₁`.
    First,
    /// `(U₁, V₁) ≠ (U, V)`, `k(U₁) + l(U₁) + im m ⊂ V₁` but `t dim(U/U₁) ≤ s dim(V/V₁)`.
    Second,
}

/// A pair of subspaces (as basis columns) violating one clause of the stability test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrommeWitness {
    pub u1: ExactMatrix,
    pub v1: ExactMatrix,
    pub clause: Clause,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefuterConfig {
    pub seed: u64,
    pub trials: usize,
}

impl Default for RefuterConfig {
    fn default() -> Self {
        RefuterConfig { seed: 0, trials: 500 }
    }
}

fn structured_candidates(tr: &StrommeTriple) -> Vec<ExactMatrix> {
    let u = tr.u;
    let mut out = vec![ExactMatrix::identity(u), ExactMatrix::zeros(u, 0)];
    let coordinate_sets: Vec<Vec<usize>> = if u <= 10 {
        (1..u).flat_map(|d| (0..u).combinations(d)).collect()
    } else {
        (0..u).map(|j| vec![j]).collect()
    };
    for set in coordinate_sets {
        out.push(ExactMatrix::identity(u).select_columns(&set));
    }
    let kernel = |a: &ExactMatrix| ExactMatrix::from_columns(u, &a.kernel());
    out.push(kernel(&tr.k));
    out.push(kernel(&tr.l));
    for c in [-2, -1, 1, 2] {
        let comb = tr.k.add(&tr.l.scale(&GaussRat::from_int(c))).expect("same shape");
        out.push(kernel(&comb));
    }
    out
}

fn random_subspace(u: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    let d = rng.gen_range(0..=u);
    ExactMatrix::from_fn(u, d, |_, _| GaussRat::from_ints(rng.gen_range(-2..=2), rng.gen_range(-2..=2)))
}

fn span(parts: &[&ExactMatrix], rows: usize) -> ExactMatrix {
    let all = parts.iter().fold(ExactMatrix::zeros(rows, 0), |acc, p| acc.hstack(p).expect("row counts agree"));
    all.column_space()
}

/// Searches structured and random subspaces `U₁ ⊂ U` for a violation of the stability
/// test at parameters `(s, t)`, pairing each `U₁` with the smallest admissible `V₁`.
/// Refutation only: `None` does not prove stability.
pub fn stromme_refuter(
    tr: &StrommeTriple,
    s: &EpsRational,
    t: &EpsRational,
    cfg: &RefuterConfig,
) -> Result<Option<StrommeWitness>, FamilyError> {
    if !s.is_positive() || !t.is_positive() {
        return Err(FamilyError::NonPositiveParameter);
    }
    let check = |b: &ExactMatrix| -> Option<StrommeWitness> {
        let u1 = b.column_space();
        let d = u1.cols();
        let ku = tr.k.mul(&u1).expect("shapes");
        let lu = tr.l.mul(&u1).expect("shapes");
        let v1 = span(&[&ku, &lu], tr.v);
        if (d, v1.cols()) != (0, 0) && s.times(v1.cols()) <= t.times(d) {
            return Some(StrommeWitness { u1, v1, clause: Clause::First });
        }
        let v2 = span(&[&ku, &lu, &tr.m], tr.v);
        if (d, v2.cols()) != (tr.u, tr.v) && t.times(tr.u - d) <= s.times(tr.v - v2.cols()) {
            return Some(StrommeWitness { u1, v1: v2, clause: Clause::Second });
        }
        None
    };
    for cand in structured_candidates(tr) {
        if let Some(w) = check(&cand) {
            return Ok(Some(w));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.trials {
        if let Some(w) = check(&random_subspace(tr.u, &mut rng)) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotInvariants {
    pub rank: usize,
    pub degree: usize,
}

/// Rank `v − u` and degree `u` of the quotient sheaf on `ℙ¹` defined by a Strømme triple.
pub fn quot_invariants(t: &StrommeTriple) -> Result<QuotInvariants, FamilyError> {
    if !stromme_check(t)?.is_triple {
        return Err(FamilyError::NotATriple);
    }
    Ok(QuotInvariants { rank: t.r(), degree: t.u })
}

/// File form: `{"u": .., "v": .., "w": .., "k": matrix, "l": matrix, "m": matrix}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrommeFile {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub k: ExactMatrix,
    pub l: ExactMatrix,
    pub m: ExactMatrix,
}

impl StrommeFile {
    pub fn triple(&self) -> Result<StrommeTriple, FamilyError> {
        // a JSON matrix with no entries cannot carry its shape
        let reshape = |a: &ExactMatrix, rows: usize, cols: usize| {
            if a.entries().is_empty() && rows * cols == 0 {
                ExactMatrix::zeros(rows, cols)
            } else {
                a.clone()
            }
        };
        StrommeTriple::new(
            self.u,
            self.v,
            self.w,
            reshape(&self.k, self.v, self.u),
            reshape(&self.l, self.v, self.u),
            reshape(&self.m, self.v, self.w),
        )
    }
}

impl From<&StrommeTriple> for StrommeFile {
    fn from(t: &StrommeTriple) -> Self {
        StrommeFile { u: t.u, v: t.v, w: t.w, k: t.k.clone(), l: t.l.clone(), m: t.m.clone() }
    }
}

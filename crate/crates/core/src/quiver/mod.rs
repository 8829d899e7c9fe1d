//! Quiver problems: representation spaces `⊕_a Hom(W_{s(a)}, W_{t(a)} ⊗ W_a⁰)`, their
//! moment maps for a product of vertex unitary groups or a subtorus kernel, and a
//! numerical Kempf–Ness flow used as a polystability oracle.
//!
//! Conventions: the Hermitian product `h(a, b) = Tr(a† b)` is conjugate-linear in the first
//! slot and `ω(a, b) = −Im h(a, b)`. Moment values and levels are stored without the factor
//! `i`, so they are Hermitian matrices and real numbers. A Hermitian `ξ` acts on an arrow
//! by `A_ξ f = f ξ_{s} − (ξ_{t} ⊗ 1) f`, the fundamental vector field is `i A_ξ p`, and the
//! pairing of Hermitian tuples is `Σ_v Tr(ξ_v η_v)`.

mod flow;
mod moment;
mod schema;

use num_rational::BigRational;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::{CMatrix, ExactMatrix, FloatMatrix, LinalgError, Mode};
use crate::toric::ToricMatrix;

pub use flow::{
    kempf_ness_flow, numerical_stability_verdict, properness_refuter, FlowConfig, FlowResult, StopReason,
};
pub use moment::{hamiltonian_check, moment_map, stabilizer_singular_value};
pub use schema::{level_to_json, point_to_json, ArrowFile, LevelFile, PointFile, QuiverFile, QuiverShape, SymmetryFile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuiverError {
    #[error("invalid quiver: {0}")]
    Invalid(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("level does not match the symmetry: {0}")]
    LevelMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Arrows are `(id, source id, target id)`.
    pub fn new<S: Into<String>>(vertices: Vec<S>, arrows: Vec<(S, S, S)>) -> Result<Self, QuiverError> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if let Some(dup) = first_duplicate(&vertices) {
            return Err(QuiverError::Invalid(format!("duplicate vertex id {dup:?}")));
        }
        let mut out = Vec::with_capacity(arrows.len());
        for (id, s, t) in arrows {
            let (id, s, t): (String, String, String) = (id.into(), s.into(), t.into());
            let find = |v: &str| {
                vertices
                    .iter()
                    .position(|x| x == v)
                    .ok_or_else(|| QuiverError::Invalid(format!("arrow {id:?} uses unknown vertex {v:?}")))
            };
            let (src, dst) = (find(&s)?, find(&t)?);
            out.push(Arrow { id, src, dst });
        }
        let ids: Vec<String> = out.iter().map(|a| a.id.clone()).collect();
        if let Some(dup) = first_duplicate(&ids) {
            return Err(QuiverError::Invalid(format!("duplicate arrow id {dup:?}")));
        }
        Ok(Quiver { vertices, arrows: out })
    }

    /// `1 → 2 → … → n` with arrows `f1, …, f(n−1)`.
    pub fn chain(n: usize) -> Self {
        let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (1..n).map(|i| (format!("f{i}"), i.to_string(), (i + 1).to_string())).collect();
        Quiver::new(vertices, arrows).expect("chain quiver is valid")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }
}

fn first_duplicate(ids: &[String]) -> Option<&String> {
    ids.iter().enumerate().find(|(i, x)| ids[..*i].contains(x)).map(|(_, x)| x)
}

/// `dim W_v` per vertex and `dim W_a⁰` per arrow, in quiver order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverDims {
    pub vertex_dim: Vec<usize>,
    pub twist_dim: Vec<usize>,
}

impl QuiverDims {
    /// Untwisted dimensions.
    pub fn untwisted(quiver: &Quiver, vertex_dim: Vec<usize>) -> Self {
        QuiverDims { vertex_dim, twist_dim: vec![1; quiver.arrows.len()] }
    }
}

/// Which subgroup of the symmetry group the moment map is taken for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetrySpec {
    /// `∏_{v ∈ S} U(W_v)`; vertex indices in the order levels and moment blocks use.
    FullVertexProduct(Vec<usize>),
    /// The kernel of the torus epimorphism `T^r → T^m` given by `v`, acting diagonally on
    /// the `r` arrow coordinates. Requires every dimension to be 1.
    TorusKernel(ToricMatrix),
}

/// A quiver with dimensions and a symmetry specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverProblem {
    pub quiver: Quiver,
    pub dims: QuiverDims,
    pub symmetry: SymmetrySpec,
}

/// A point `(f_a)_a` of the representation space, all maps in the same arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverPoint {
    pub maps: Vec<CMatrix>,
}

/// The central level `t`; the `i` of `i𝔱` is dropped.
#[derive(Clone, Debug, PartialEq)]
pub enum Level {
    /// One rational `t_v` per vertex of `S`, in `S` order.
    Vertex(Vec<BigRational>),
    /// A representative `a ∈ ℚ^r` of the level class modulo `im(vᵀ)`.
    Torus(Vec<BigRational>),
}

impl QuiverProblem {
    pub fn new(quiver: Quiver, dims: QuiverDims, symmetry: SymmetrySpec) -> Result<Self, QuiverError> {
        let (nv, na) = (quiver.vertices.len(), quiver.arrows.len());
        if dims.vertex_dim.len() != nv || dims.twist_dim.len() != na {
            return Err(QuiverError::Invalid("dimensions must cover every vertex and arrow".into()));
        }
        if dims.vertex_dim.contains(&0) || dims.twist_dim.contains(&0) {
            return Err(QuiverError::Invalid("dimensions must be positive".into()));
        }
        match &symmetry {
            SymmetrySpec::FullVertexProduct(s) => {
                if s.is_empty() {
                    return Err(QuiverError::Invalid("symmetry vertex set is empty".into()));
                }
                if s.iter().any(|&v| v >= nv) || (1..s.len()).any(|i| s[..i].contains(&s[i])) {
                    return Err(QuiverError::Invalid("symmetry vertex set must be distinct vertices".into()));
                }
            }
            SymmetrySpec::TorusKernel(v) => {
                if v.r() != na {
                    return Err(QuiverError::Invalid(format!(
                        "torus matrix has {} columns but the quiver has {na} arrows",
                        v.r()
                    )));
                }
                if dims.vertex_dim.iter().chain(&dims.twist_dim).any(|&d| d != 1) {
                    return Err(QuiverError::Invalid("torus symmetry needs all dimensions equal to 1".into()));
                }
                if v.m() == na {
                    return Err(QuiverError::Invalid("torus kernel is trivial".into()));
                }
            }
        }
        Ok(QuiverProblem { quiver, dims, symmetry })
    }

    /// `C^r → C^{r0}` with the unitary group of the source: the Grassmann problem.
    pub fn grassmann(r: usize, r0: usize) -> Result<Self, QuiverError> {
        let quiver = Quiver::new(vec!["V", "C"], vec![("f", "V", "C")])?;
        let dims = QuiverDims::untwisted(&quiver, vec![r, r0]);
        QuiverProblem::new(quiver, dims, SymmetrySpec::FullVertexProduct(vec![0]))
    }

    /// The flag chain `V_1 → … → V_{m+1}` with symmetry on the first `m` vertices.
    pub fn flag_chain(dims: &[usize]) -> Result<Self, QuiverError> {
        if dims.len() < 2 {
            return Err(QuiverError::Invalid("a flag chain needs at least two spaces".into()));
        }
        let quiver = Quiver::chain(dims.len());
        let qd = QuiverDims::untwisted(&quiver, dims.to_vec());
        QuiverProblem::new(quiver, qd, SymmetrySpec::FullVertexProduct((0..dims.len() - 1).collect()))
    }

    /// `ℂ^r` with the kernel of `v` acting, realised on `r` parallel arrows between two
    /// one-dimensional vertices.
    pub fn toric(v: ToricMatrix) -> Result<Self, QuiverError> {
        let r = v.r();
        let arrows = (1..=r).map(|j| (format!("z{j}"), "0".to_string(), "1".to_string())).collect();
        let quiver = Quiver::new(vec!["0".to_string(), "1".to_string()], arrows)?;
        let dims = QuiverDims::untwisted(&quiver, vec![1, 1]);
        QuiverProblem::new(quiver, dims, SymmetrySpec::TorusKernel(v))
    }

    /// `(rows, cols)` of the map on arrow `a`.
    pub fn map_shape(&self, a: usize) -> (usize, usize) {
        let arrow = &self.quiver.arrows[a];
        (self.dims.vertex_dim[arrow.dst] * self.dims.twist_dim[a], self.dims.vertex_dim[arrow.src])
    }

    /// Sizes of the Hermitian blocks of the Lie algebra (and of moment values).
    pub fn block_sizes(&self) -> Vec<usize> {
        match &self.symmetry {
            SymmetrySpec::FullVertexProduct(s) => s.iter().map(|&v| self.dims.vertex_dim[v]).collect(),
            SymmetrySpec::TorusKernel(v) => vec![1; v.coker_basis().len()],
        }
    }

    /// Real dimension of the symmetry group.
    pub fn group_dim(&self) -> usize {
        self.block_sizes().iter().map(|n| n * n).sum()
    }

    pub fn check_point(&self, p: &QuiverPoint) -> Result<Mode, QuiverError> {
        if p.maps.len() != self.quiver.arrows.len() {
            return Err(QuiverError::Shape(format!(
                "point has {} maps, quiver has {} arrows",
                p.maps.len(),
                self.quiver.arrows.len()
            )));
        }
        for (a, m) in p.maps.iter().enumerate() {
            if m.shape() != self.map_shape(a) {
                return Err(QuiverError::Shape(format!(
                    "map on arrow {:?} is {:?}, expected {:?}",
                    self.quiver.arrows[a].id,
                    m.shape(),
                    self.map_shape(a)
                )));
            }
        }
        let mode = p.maps.first().map_or(Mode::Exact, CMatrix::mode);
        if p.maps.iter().any(|m| m.mode() != mode) {
            return Err(QuiverError::Shape("point mixes exact and float maps".into()));
        }
        Ok(mode)
    }

    pub fn check_level(&self, lvl: &Level) -> Result<(), QuiverError> {
        match (&self.symmetry, lvl) {
            (SymmetrySpec::FullVertexProduct(s), Level::Vertex(t)) if t.len() == s.len() => Ok(()),
            (SymmetrySpec::TorusKernel(v), Level::Torus(a)) if a.len() == v.r() => Ok(()),
            (SymmetrySpec::FullVertexProduct(s), _) => {
                Err(QuiverError::LevelMismatch(format!("expected {} vertex levels", s.len())))
            }
            (SymmetrySpec::TorusKernel(v), _) => {
                Err(QuiverError::LevelMismatch(format!("expected a torus level of length {}", v.r())))
            }
        }
    }

    /// The zero level of the right variant.
    pub fn zero_level(&self) -> Level {
        match &self.symmetry {
            SymmetrySpec::FullVertexProduct(s) => Level::Vertex(vec![BigRational::from_integer(0.into()); s.len()]),
            SymmetrySpec::TorusKernel(v) => Level::Torus(vec![BigRational::from_integer(0.into()); v.r()]),
        }
    }

    pub fn zero_point(&self) -> QuiverPoint {
        let maps = (0..self.quiver.arrows.len())
            .map(|a| {
                let (r, c) = self.map_shape(a);
                CMatrix::Exact(ExactMatrix::zeros(r, c))
            })
            .collect();
        QuiverPoint { maps }
    }

    /// Complex Gaussian entries rescaled to unit norm (the zero point if the space is zero).
    pub fn random_unit_point<R: Rng>(&self, rng: &mut R) -> QuiverPoint {
        let maps: Vec<FloatMatrix> = (0..self.quiver.arrows.len())
            .map(|a| {
                let (r, c) = self.map_shape(a);
                FloatMatrix::from_fn(r, c, |_, _| {
                    num_complex::Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                })
            })
            .collect();
        let norm = maps.iter().map(FloatMatrix::norm_sqr).sum::<f64>().sqrt();
        let scale = if norm > 0.0 { 1.0 / norm } else { 1.0 };
        QuiverPoint::from_float(maps.iter().map(|m| m.scale(&scale.into())).collect())
    }
}

impl QuiverPoint {
    pub fn from_float(maps: Vec<FloatMatrix>) -> Self {
        QuiverPoint { maps: maps.into_iter().map(CMatrix::Float).collect() }
    }

    pub fn from_exact(maps: Vec<ExactMatrix>) -> Self {
        QuiverPoint { maps: maps.into_iter().map(CMatrix::Exact).collect() }
    }

    pub fn to_float(&self) -> Vec<FloatMatrix> {
        self.maps.iter().map(CMatrix::to_float).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.to_float().iter().map(FloatMatrix::norm_sqr).sum()
    }
}

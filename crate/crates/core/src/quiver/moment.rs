use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Level, QuiverError, QuiverPoint, QuiverProblem, SymmetrySpec};
use crate::linalg::{rat, spectral_function, CMatrix, Entry, FloatMatrix, HermitianTuple, Matrix, Mode};

/// The moment map at level `lvl`.
///
/// For a vertex symmetry the block at `v ∈ S` is
/// `½(Σ_{s(a)=v} f_a† f_a − Σ_{t(a)=v} Tr_{W_a⁰}(f_a f_a†)) − t_v Id`. For a torus kernel
/// the value is the vector `Bᵀ(½|z_j|² − a_j)_j` in the cokernel coordinates of the toric
/// matrix, returned as `1 × 1` blocks. Exact points give exact values.
pub fn moment_map(prob: &QuiverProblem, p: &QuiverPoint, lvl: &Level) -> Result<HermitianTuple, QuiverError> {
    let mode = prob.check_point(p)?;
    prob.check_level(lvl)?;
    let blocks = match mode {
        Mode::Exact => {
            let maps: Vec<_> = p.maps.iter().map(|m| m.as_exact().cloned()).collect::<Result<_, _>>()?;
            moment_blocks(prob, &maps, &level_values(lvl)).into_iter().map(CMatrix::Exact).collect()
        }
        Mode::Float => {
            moment_blocks(prob, &p.to_float(), &level_values(lvl)).into_iter().map(CMatrix::Float).collect()
        }
    };
    Ok(HermitianTuple { blocks })
}

pub(crate) fn level_values<T: Entry>(lvl: &Level) -> Vec<T> {
    match lvl {
        Level::Vertex(t) | Level::Torus(t) => t.iter().map(T::from_rational).collect(),
    }
}

fn int<T: Entry>(k: i64) -> T {
    T::from_rational(&BigRational::from_integer(k.into()))
}

pub(crate) fn moment_blocks<T: Entry>(prob: &QuiverProblem, maps: &[Matrix<T>], level: &[T]) -> Vec<Matrix<T>> {
    let half = T::from_rational(&rat(1, 2));
    match &prob.symmetry {
        SymmetrySpec::FullVertexProduct(s) => s
            .iter()
            .zip(level)
            .map(|(&v, t)| {
                let n = prob.dims.vertex_dim[v];
                let mut acc = Matrix::<T>::zeros(n, n);
                for (a, arrow) in prob.quiver.arrows().iter().enumerate() {
                    let f = &maps[a];
                    if arrow.src == v {
                        acc = acc.add(&f.adjoint().mul(f).expect("shapes checked")).expect("square");
                    }
                    if arrow.dst == v {
                        let ff = f.mul(&f.adjoint()).expect("shapes checked");
                        let tr = ff.partial_trace_inner(prob.dims.twist_dim[a]).expect("twist divides rows");
                        acc = acc.sub(&tr).expect("square");
                    }
                }
                acc.scale(&half).sub(&Matrix::identity(n).scale(t)).expect("square")
            })
            .collect(),
        SymmetrySpec::TorusKernel(v) => {
            let shifted: Vec<T> = maps
                .iter()
                .zip(level)
                .map(|(z, a)| {
                    let z = z.get(0, 0).clone();
                    half.clone() * (z.conj() * z) - a.clone()
                })
                .collect();
            v.coker_basis()
                .iter()
                .map(|b| {
                    let c = b.iter().zip(&shifted).fold(T::zero(), |acc, (&bj, x)| acc + int::<T>(bj) * x.clone());
                    Matrix::from_fn(1, 1, |_, _| c.clone())
                })
                .collect()
        }
    }
}

/// `A_ξ p`: the complexified infinitesimal action of a Hermitian tuple, so that the
/// fundamental vector field of `ξ` is `i A_ξ p`.
pub(crate) fn act<T: Entry>(prob: &QuiverProblem, xi: &[Matrix<T>], maps: &[Matrix<T>]) -> Vec<Matrix<T>> {
    match &prob.symmetry {
        SymmetrySpec::FullVertexProduct(s) => {
            let block = |v: usize| s.iter().position(|&x| x == v).map(|k| &xi[k]);
            prob.quiver
                .arrows()
                .iter()
                .enumerate()
                .map(|(a, arrow)| {
                    let f = &maps[a];
                    let mut out = Matrix::<T>::zeros(f.rows(), f.cols());
                    if let Some(xs) = block(arrow.src) {
                        out = out.add(&f.mul(xs).expect("shapes")).expect("shapes");
                    }
                    if let Some(xt) = block(arrow.dst) {
                        let lifted = xt.kron_identity(prob.dims.twist_dim[a]);
                        out = out.sub(&lifted.mul(f).expect("shapes")).expect("shapes");
                    }
                    out
                })
                .collect()
        }
        SymmetrySpec::TorusKernel(v) => {
            let weights = torus_weights(v.coker_basis(), xi);
            maps.iter().zip(weights).map(|(z, w)| z.scale(&w)).collect()
        }
    }
}

/// `(B ξ)_j` for a torus Lie algebra element given in cokernel coordinates.
fn torus_weights<T: Entry>(basis: &[Vec<i64>], xi: &[Matrix<T>]) -> Vec<T> {
    let r = basis.first().map_or(0, Vec::len);
    (0..r)
        .map(|j| basis.iter().zip(xi).fold(T::zero(), |acc, (b, x)| acc + int::<T>(b[j]) * x.get(0, 0).clone()))
        .collect()
}

/// `exp(−s A_μ) p`, the complex group element generated by a Hermitian tuple.
pub(crate) fn exp_act(
    prob: &QuiverProblem,
    mu: &[FloatMatrix],
    s: f64,
    maps: &[FloatMatrix],
) -> Result<Vec<FloatMatrix>, QuiverError> {
    match &prob.symmetry {
        SymmetrySpec::FullVertexProduct(sv) => {
            let mut plus = Vec::with_capacity(mu.len());
            let mut minus = Vec::with_capacity(mu.len());
            for m in mu {
                let (vals, vecs) = crate::linalg::hermitian_eigen(&CMatrix::Float(m.clone()), 1e-9)?;
                plus.push(spectral_function(&vals, &vecs, |l| (s * l).exp()));
                minus.push(spectral_function(&vals, &vecs, |l| (-s * l).exp()));
            }
            let idx = |v: usize| sv.iter().position(|&x| x == v);
            Ok(prob
                .quiver
                .arrows()
                .iter()
                .enumerate()
                .map(|(a, arrow)| {
                    let mut f = maps[a].clone();
                    if let Some(k) = idx(arrow.src) {
                        f = f.mul(&minus[k]).expect("shapes");
                    }
                    if let Some(k) = idx(arrow.dst) {
                        f = plus[k].kron_identity(prob.dims.twist_dim[a]).mul(&f).expect("shapes");
                    }
                    f
                })
                .collect())
        }
        SymmetrySpec::TorusKernel(v) => {
            let weights = torus_weights(v.coker_basis(), mu);
            Ok(maps.iter().zip(weights).map(|(z, w)| z.scale(&Complex64::from((-s * w.re).exp()))).collect())
        }
    }
}

pub(crate) fn energy(mu: &[FloatMatrix]) -> f64 {
    mu.iter().map(FloatMatrix::norm_sqr).sum()
}

fn hermitian_pairing(a: &[FloatMatrix], b: &[FloatMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.mul(y).expect("block shapes").trace().re).sum()
}

/// `h(a, b) = Σ Tr(a† b)`.
fn h_product(a: &[FloatMatrix], b: &[FloatMatrix]) -> Complex64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.entries().iter().zip(y.entries()).map(|(u, v)| u.conj() * v).sum::<Complex64>())
        .sum()
}

/// Checks `d⟨μ, ξ⟩_p(w) = ω(ξ_F(p), w)` by a central difference with step `h`; returns the
/// relative error `|lhs − rhs| / (|lhs| + |rhs| + 1e−12)`.
pub fn hamiltonian_check(
    prob: &QuiverProblem,
    p: &QuiverPoint,
    lvl: &Level,
    xi: &HermitianTuple,
    w: &QuiverPoint,
    h: f64,
) -> Result<f64, QuiverError> {
    prob.check_point(p)?;
    prob.check_point(w)?;
    prob.check_level(lvl)?;
    let sizes = prob.block_sizes();
    if xi.blocks.len() != sizes.len() || xi.blocks.iter().zip(&sizes).any(|(b, &n)| b.shape() != (n, n)) {
        return Err(QuiverError::Shape(format!("ξ must have square blocks of sizes {sizes:?}")));
    }
    let xi = xi.to_float();
    let (p, w) = (p.to_float(), w.to_float());
    let level = level_values::<Complex64>(lvl);
    let shifted = |sign: f64| -> Vec<FloatMatrix> {
        p.iter().zip(&w).map(|(a, b)| a.add(&b.scale(&Complex64::from(sign * h))).expect("shapes")).collect()
    };
    let plus = hermitian_pairing(&moment_blocks(prob, &shifted(1.0), &level), &xi);
    let minus = hermitian_pairing(&moment_blocks(prob, &shifted(-1.0), &level), &xi);
    let lhs = (plus - minus) / (2.0 * h);
    let field: Vec<FloatMatrix> =
        act(prob, &xi, &p).iter().map(|m| m.scale(&Complex64::i())).collect();
    let rhs = -h_product(&field, &w).im;
    Ok((lhs - rhs).abs() / (lhs.abs() + rhs.abs() + 1e-12))
}

/// Hermitian basis of the Lie algebra: `E_jj`, `E_jk + E_kj`, `i(E_jk − E_kj)` per block.
fn lie_basis(sizes: &[usize]) -> Vec<Vec<FloatMatrix>> {
    let mut out = Vec::new();
    for (b, &n) in sizes.iter().enumerate() {
        let embed = |m: FloatMatrix| -> Vec<FloatMatrix> {
            sizes.iter().enumerate().map(|(c, &k)| if c == b { m.clone() } else { FloatMatrix::zeros(k, k) }).collect()
        };
        for j in 0..n {
            for k in j..n {
                if j == k {
                    out.push(embed(FloatMatrix::from_fn(n, n, |x, y| if x == j && y == j { 1.0.into() } else { Complex64::zero() })));
                } else {
                    out.push(embed(FloatMatrix::from_fn(n, n, |x, y| match (x, y) {
                        (x, y) if x == j && y == k => 1.0.into(),
                        (x, y) if x == k && y == j => 1.0.into(),
                        _ => Complex64::zero(),
                    })));
                    out.push(embed(FloatMatrix::from_fn(n, n, |x, y| match (x, y) {
                        (x, y) if x == j && y == k => Complex64::i(),
                        (x, y) if x == k && y == j => -Complex64::i(),
                        _ => Complex64::zero(),
                    })));
                }
            }
        }
    }
    out
}

/// Real matrix of `ξ ↦ i A_ξ p` over the Hermitian basis, rows interleaving real and
/// imaginary parts of every map entry.
pub(crate) fn infinitesimal_action(prob: &QuiverProblem, maps: &[FloatMatrix]) -> nalgebra::DMatrix<f64> {
    let basis = lie_basis(&prob.block_sizes());
    let n: usize = maps.iter().map(|m| m.entries().len()).sum();
    let mut out = nalgebra::DMatrix::<f64>::zeros(2 * n, basis.len());
    for (c, xi) in basis.iter().enumerate() {
        let image = act(prob, xi, maps);
        let entries = image.iter().flat_map(|m| m.entries().iter().map(|z| z * Complex64::i()));
        for (k, z) in entries.enumerate() {
            out[(2 * k, c)] = z.re;
            out[(2 * k + 1, c)] = z.im;
        }
    }
    out
}

/// Smallest singular value of the infinitesimal action at `p`; zero when the group is
/// larger than the representation space, `+∞` for a trivial group.
pub fn stabilizer_singular_value(prob: &QuiverProblem, p: &QuiverPoint) -> Result<f64, QuiverError> {
    prob.check_point(p)?;
    let a = infinitesimal_action(prob, &p.to_float());
    Ok(min_singular_value(&a))
}

pub(crate) fn min_singular_value(a: &nalgebra::DMatrix<f64>) -> f64 {
    if a.ncols() == 0 {
        return f64::INFINITY;
    }
    if a.ncols() > a.nrows() {
        return 0.0;
    }
    a.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

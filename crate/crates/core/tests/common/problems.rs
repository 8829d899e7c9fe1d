//! Seeded random quiver problems, points and Lie algebra elements for the three symmetry
//! shapes: untwisted vertex groups, twisted vertex groups and torus kernels.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use sfpas_core::linalg::{rat, CMatrix, FloatMatrix, HermitianTuple};
use sfpas_core::quiver::{Level, Quiver, QuiverDims, QuiverPoint, QuiverProblem, SymmetrySpec};
use sfpas_core::toric::ToricMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Untwisted,
    Twisted,
    Torus,
}

pub const SHAPES: [Shape; 3] = [Shape::Untwisted, Shape::Twisted, Shape::Torus];

fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A quiver on two or three vertices with up to three arrows (loops allowed), vertex
/// dimensions at most 4 and a random nonempty symmetry set.
pub fn random_vertex_problem<R: Rng>(rng: &mut R, twisted: bool) -> QuiverProblem {
    let nv = rng.gen_range(2..=3);
    let na = rng.gen_range(1..=3);
    let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let arrows: Vec<(String, String, String)> = (0..na)
        .map(|a| (format!("a{a}"), names[rng.gen_range(0..nv)].clone(), names[rng.gen_range(0..nv)].clone()))
        .collect();
    let quiver = Quiver::new(names, arrows).unwrap();
    let vertex_dim = (0..nv).map(|_| rng.gen_range(1..=4)).collect();
    let twist_dim = (0..na).map(|_| if twisted { rng.gen_range(1..=2) } else { 1 }).collect();
    let mut s: Vec<usize> = (0..nv).filter(|_| rng.gen_bool(0.6)).collect();
    if s.is_empty() {
        s.push(rng.gen_range(0..nv));
    }
    QuiverProblem::new(quiver, QuiverDims { vertex_dim, twist_dim }, SymmetrySpec::FullVertexProduct(s)).unwrap()
}

/// The ℙ¹, ℙ², ℙ¹×ℙ¹ and first Hirzebruch matrices.
pub fn toric_matrices() -> Vec<ToricMatrix> {
    vec![
        ToricMatrix::new(vec![vec![1, -1]]).unwrap(),
        ToricMatrix::new(vec![vec![1, 0, -1], vec![0, 1, -1]]).unwrap(),
        ToricMatrix::new(vec![vec![1, -1, 0, 0], vec![0, 0, 1, -1]]).unwrap(),
        ToricMatrix::new(vec![vec![1, 0, -1, 0], vec![0, 1, 1, -1]]).unwrap(),
    ]
}

pub fn random_problem<R: Rng>(shape: Shape, rng: &mut R) -> QuiverProblem {
    match shape {
        Shape::Untwisted => random_vertex_problem(rng, false),
        Shape::Twisted => random_vertex_problem(rng, true),
        Shape::Torus => {
            let mats = toric_matrices();
            let k = rng.gen_range(0..mats.len());
            QuiverProblem::toric(mats[k].clone()).unwrap()
        }
    }
}

/// Complex Gaussian float point (not normalised).
pub fn random_point<R: Rng>(prob: &QuiverProblem, rng: &mut R) -> QuiverPoint {
    let maps = (0..prob.quiver.arrows().len())
        .map(|a| {
            let (r, c) = prob.map_shape(a);
            FloatMatrix::from_fn(r, c, |_, _| gaussian(rng))
        })
        .collect();
    QuiverPoint::from_float(maps)
}

/// A level with entries drawn from `{−2, −3/2, …, 2}`.
pub fn random_level<R: Rng>(prob: &QuiverProblem, rng: &mut R) -> Level {
    let mut draw = || rat(rng.gen_range(-4..=4), 2);
    match &prob.symmetry {
        SymmetrySpec::FullVertexProduct(s) => Level::Vertex(s.iter().map(|_| draw()).collect()),
        SymmetrySpec::TorusKernel(v) => Level::Torus((0..v.r()).map(|_| draw()).collect()),
    }
}

/// A random float Hermitian tuple with the block sizes of the problem.
pub fn random_hermitian<R: Rng>(prob: &QuiverProblem, rng: &mut R) -> HermitianTuple {
    let blocks = prob
        .block_sizes()
        .into_iter()
        .map(|n| {
            let a = FloatMatrix::from_fn(n, n, |_, _| gaussian(rng));
            CMatrix::Float(a.add(&a.adjoint()).unwrap().scale(&Complex64::from(0.5)))
        })
        .collect();
    HermitianTuple::new(blocks).unwrap()
}

mod common {
    pub mod problems;
}

use common::problems::{random_hermitian, random_level, random_point, random_problem, random_vertex_problem, SHAPES};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sfpas_core::linalg::{rat, rat_int, CMatrix, ExactMatrix, FloatMatrix, GaussRat, HermitianTuple};
use sfpas_core::quiver::{
    hamiltonian_check, kempf_ness_flow, moment_map, numerical_stability_verdict, properness_refuter, FlowConfig,
    Level, Quiver, QuiverDims, QuiverPoint, QuiverProblem, StopReason, SymmetrySpec,
};
use sfpas_core::StabilityVerdict;

fn scalar(z: i64) -> QuiverPoint {
    QuiverPoint::from_exact(vec![ExactMatrix::from_ints(1, 1, &[z])])
}

fn haar_unitary<R: Rng>(n: usize, rng: &mut R) -> FloatMatrix {
    let a = DMatrix::<Complex64>::from_fn(n, n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    FloatMatrix::from_nalgebra(&a.qr().q())
}

/// `f_a ↦ (g_{t(a)} ⊗ 1) f_a g_{s(a)}†`, with `g = 1` off the symmetry set.
fn act_unitary(prob: &QuiverProblem, g: &[Option<FloatMatrix>], p: &QuiverPoint) -> QuiverPoint {
    let maps = p
        .to_float()
        .iter()
        .zip(prob.quiver.arrows())
        .enumerate()
        .map(|(a, (f, arrow))| {
            let mut f = f.clone();
            if let Some(gs) = &g[arrow.src] {
                f = f.mul(&gs.adjoint()).unwrap();
            }
            if let Some(gt) = &g[arrow.dst] {
                f = gt.kron_identity(prob.dims.twist_dim[a]).mul(&f).unwrap();
            }
            f
        })
        .collect();
    QuiverPoint::from_float(maps)
}

#[test]
fn moment_map_examples() {
    let prob = QuiverProblem::grassmann(1, 1).unwrap();
    for z in [1, 2, 3] {
        let lvl = Level::Vertex(vec![rat(z * z, 2)]);
        let mu = moment_map(&prob, &scalar(z), &lvl).unwrap();
        assert!(mu.blocks[0].as_exact().unwrap().is_zero_matrix());
    }
    let flag = QuiverProblem::flag_chain(&[1, 2, 3]).unwrap();
    let mu = moment_map(&flag, &flag.zero_point(), &Level::Vertex(vec![rat_int(1), rat_int(1)])).unwrap();
    assert_eq!(mu.blocks[0].as_exact().unwrap(), &ExactMatrix::from_ints(1, 1, &[-1]));
    assert_eq!(mu.blocks[1].as_exact().unwrap(), &ExactMatrix::from_ints(2, 2, &[-1, 0, 0, -1]));
}

#[test]
fn moment_map_is_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let twisted = rng.gen_bool(0.5);
        let prob = random_vertex_problem(&mut rng, twisted);
        let p = random_point(&prob, &mut rng);
        let lvl = random_level(&prob, &mut rng);
        let SymmetrySpec::FullVertexProduct(s) = &prob.symmetry else { unreachable!() };
        let g: Vec<Option<FloatMatrix>> = (0..prob.quiver.vertices().len())
            .map(|v| s.contains(&v).then(|| haar_unitary(prob.dims.vertex_dim[v], &mut rng)))
            .collect();
        let moved = moment_map(&prob, &act_unitary(&prob, &g, &p), &lvl).unwrap();
        let before = moment_map(&prob, &p, &lvl).unwrap();
        let bound = 1e-9 * (1.0 + p.norm_sqr());
        for (k, &v) in s.iter().enumerate() {
            let gv = g[v].as_ref().unwrap();
            let conj = gv.mul(&before.blocks[k].to_float()).unwrap().mul(&gv.adjoint()).unwrap();
            let err = moved.blocks[k].to_float().sub(&conj).unwrap().norm();
            assert!(err <= bound, "equivariance defect {err:e} on {prob:?}");
        }
    }
}

#[test]
fn hamiltonian_identity_holds_for_every_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 0..100 {
        let shape = SHAPES[n % 3];
        let prob = random_problem(shape, &mut rng);
        let p = random_point(&prob, &mut rng);
        let w = random_point(&prob, &mut rng);
        let xi = random_hermitian(&prob, &mut rng);
        let lvl = random_level(&prob, &mut rng);
        let err = hamiltonian_check(&prob, &p, &lvl, &xi, &w, 1e-5).unwrap();
        assert!(err <= 1e-5, "{shape:?}: error {err:e}");
    }
}

#[test]
fn hamiltonian_examples() {
    let prob = QuiverProblem::grassmann(1, 1).unwrap();
    let xi = HermitianTuple::new(vec![CMatrix::Exact(ExactMatrix::identity(1))]).unwrap();
    let lvl = Level::Vertex(vec![rat(1, 2)]);
    assert!(hamiltonian_check(&prob, &scalar(1), &lvl, &xi, &scalar(1), 1e-5).unwrap() < 1e-6);
    // at the origin both sides vanish for every direction
    let w = QuiverPoint::from_exact(vec![ExactMatrix::new(1, 1, vec![GaussRat::from_ints(0, 1)]).unwrap()]);
    assert_eq!(hamiltonian_check(&prob, &scalar(0), &lvl, &xi, &w, 1e-5).unwrap(), 0.0);
}

#[test]
fn level_enters_as_an_exact_shift() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let dims: Vec<usize> = (0..rng.gen_range(2..=4)).map(|_| rng.gen_range(1..=3)).collect();
        let prob = QuiverProblem::flag_chain(&dims).unwrap();
        let maps = (0..dims.len() - 1)
            .map(|i| {
                ExactMatrix::from_fn(dims[i + 1], dims[i], |_, _| {
                    GaussRat::new(rat(rng.gen_range(-6..=6), rng.gen_range(1..=3)), rat(rng.gen_range(-3..=3), 2))
                })
            })
            .collect();
        let p = QuiverPoint::from_exact(maps);
        let Level::Vertex(t) = random_level(&prob, &mut rng) else { unreachable!() };
        let at_t = moment_map(&prob, &p, &Level::Vertex(t.clone())).unwrap();
        let at_zero = moment_map(&prob, &p, &prob.zero_level()).unwrap();
        for (k, tk) in t.iter().enumerate() {
            let n = dims[k];
            let shifted = at_zero.blocks[k]
                .as_exact()
                .unwrap()
                .sub(&ExactMatrix::identity(n).scale(&GaussRat::real(tk.clone())))
                .unwrap();
            assert_eq!(at_t.blocks[k].as_exact().unwrap(), &shifted);
        }
    }
}

#[test]
fn flow_examples() {
    let cfg = FlowConfig::default();
    let prob = QuiverProblem::grassmann(1, 1).unwrap();
    let half = Level::Vertex(vec![rat(1, 2)]);
    let res = kempf_ness_flow(&prob, &scalar(1), &half, &cfg).unwrap();
    assert!(res.final_energy < cfg.tol * cfg.tol);
    assert!((res.final_point.to_float()[0].get(0, 0).norm_sqr() - 1.0).abs() < 1e-6);

    let res = kempf_ness_flow(&prob, &scalar(0), &half, &cfg).unwrap();
    assert_eq!(res.final_energy, 0.25);
    assert_eq!(res.verdict, StabilityVerdict::Unstable);

    let flag = QuiverProblem::flag_chain(&[1, 2, 3]).unwrap();
    let injective = QuiverPoint::from_exact(vec![
        ExactMatrix::from_ints(2, 1, &[1, 2]),
        ExactMatrix::from_ints(3, 2, &[1, 0, 0, 1, 1, 1]),
    ]);
    let lvl = Level::Vertex(vec![rat_int(1), rat(1, 2)]);
    assert_eq!(numerical_stability_verdict(&flag, &injective, &lvl, &cfg).unwrap(), StabilityVerdict::Stable);
    let with_kernel = QuiverPoint::from_exact(vec![
        ExactMatrix::from_ints(2, 1, &[1, 2]),
        ExactMatrix::from_ints(3, 2, &[1, 2, 2, 4, 0, 0]),
    ]);
    assert_eq!(numerical_stability_verdict(&flag, &with_kernel, &lvl, &cfg).unwrap(), StabilityVerdict::Unstable);
}

#[test]
fn flow_energy_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = FlowConfig { max_iter: 2000, ..FlowConfig::default() };
    for n in 0..30 {
        let prob = random_problem(SHAPES[n % 3], &mut rng);
        let p = random_point(&prob, &mut rng);
        let lvl = random_level(&prob, &mut rng);
        let res = kempf_ness_flow(&prob, &p, &lvl, &cfg).unwrap();
        assert!(res.energy_trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(res.final_energy >= 0.0);
        assert_eq!(res.energy_trace.len(), res.iterations + 1);
    }
}

#[test]
fn properness_examples() {
    let cfg = FlowConfig { seed: 5, ..FlowConfig::default() };
    let grassmann = QuiverProblem::grassmann(1, 1).unwrap();
    assert!(properness_refuter(&grassmann, &cfg, 10).unwrap().is_none());
    for dims in [[1, 1], [1, 3], [2, 3], [3, 3]] {
        let prob = QuiverProblem::flag_chain(&dims).unwrap();
        assert!(properness_refuter(&prob, &cfg, 10).unwrap().is_none(), "{dims:?}");
    }

    let cycle = Quiver::new(vec!["a", "b"], vec![("f", "a", "b"), ("g", "b", "a")]).unwrap();
    let dims = QuiverDims::untwisted(&cycle, vec![1, 1]);
    let prob = QuiverProblem::new(cycle, dims, SymmetrySpec::FullVertexProduct(vec![0, 1])).unwrap();
    let witness = properness_refuter(&prob, &cfg, 10).unwrap().expect("the cycle has nonzero zeros");
    let maps = witness.to_float();
    let (f, g) = (maps[0].get(0, 0).norm_sqr(), maps[1].get(0, 0).norm_sqr());
    assert!((f + g - 1.0).abs() < 1e-12);
    assert!((f - g).abs() < 1e-7);
}

#[test]
fn torus_flow_reaches_the_level_set() {
    // ℙ² at a = (0, 0, 1): every point with all coordinates nonzero is stable
    let v = sfpas_core::toric::ToricMatrix::new(vec![vec![1, 0, -1], vec![0, 1, -1]]).unwrap();
    let prob = QuiverProblem::toric(v).unwrap();
    let p = QuiverPoint::from_exact((1..=3).map(|j| ExactMatrix::from_ints(1, 1, &[j])).collect());
    let lvl = Level::Torus(vec![rat_int(0), rat_int(0), rat_int(1)]);
    let res = kempf_ness_flow(&prob, &p, &lvl, &FlowConfig::default()).unwrap();
    assert_eq!(res.stop, StopReason::Converged);
    assert_eq!(res.verdict, StabilityVerdict::Stable);
    let z: f64 = res.final_point.to_float().iter().map(|m| m.get(0, 0).norm_sqr()).sum();
    assert!((z / 2.0 - 1.0).abs() < 1e-7);
}

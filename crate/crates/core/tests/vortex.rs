use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use sfpas_core::vortex::{
    bradlow_threshold, newton_steps, quantization_check, solve_vortex, spectral_upsample, threshold_scan, Center,
    TorusGrid, VortexConfig, VortexError, VortexField, VortexProblem,
};

const VOL: f64 = 4.0 * PI * PI;

fn one_vortex(n: usize, t: f64) -> VortexProblem {
    VortexProblem::new(TorusGrid::new(n, 2.0 * PI).unwrap(), -1, vec![Center { x: 0.5, y: 0.5, mult: 1 }], t).unwrap()
}

/// `Δu` through explicit DFT matrices, one axis at a time.
fn laplacian(n: usize, l: f64, u: &[f64]) -> Vec<f64> {
    let k = |i: usize| {
        let s = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
        2.0 * PI * s / l
    };
    let w = |i: usize, j: usize, sign: f64| Complex64::from_polar(1.0, sign * 2.0 * PI * (i * j % n) as f64 / n as f64);
    let transform = |a: &[Complex64], sign: f64, along_rows: bool| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for p in 0..n {
            for q in 0..n {
                out[p * n + q] = (0..n)
                    .map(|s| if along_rows { a[s * n + q] * w(p, s, sign) } else { a[p * n + s] * w(q, s, sign) })
                    .sum();
            }
        }
        out
    };
    let c: Vec<Complex64> = u.iter().map(|&x| Complex64::from(x)).collect();
    let mut hat = transform(&transform(&c, -1.0, true), -1.0, false);
    for p in 0..n {
        for q in 0..n {
            // the Nyquist mode of a real field has no well-defined derivative sign; the
            // symbol −k² is even, so it is kept
            hat[p * n + q] *= -(k(p).powi(2) + k(q).powi(2));
        }
    }
    let back = transform(&transform(&hat, 1.0, true), 1.0, false);
    back.iter().map(|z| z.re / (n * n) as f64).collect()
}

fn oracle_residual(p: &VortexProblem, u: &[f64]) -> f64 {
    let lap = laplacian(p.grid.n, p.grid.l, u);
    let b0 = p.b0();
    lap.iter()
        .zip(&b0)
        .zip(u)
        .map(|((d, b), x)| (d - (0.5 * b * (2.0 * x).exp() - p.tau0())).abs())
        .fold(0.0, f64::max)
}

#[test]
fn threshold_values() {
    assert_eq!(bradlow_threshold(0, VOL), 0.0);
    assert!((bradlow_threshold(-1, VOL) - 1.0 / (2.0 * PI)).abs() < 1e-15);
    assert!((bradlow_threshold(-2, VOL) - 1.0 / PI).abs() < 1e-15);
    // τ₀ vanishes exactly at the threshold, for any degree
    for d in [-3, -1, 0] {
        let grid = TorusGrid::new(16, 3.0).unwrap();
        let centers = (0..-d).map(|k| Center { x: 0.2 * k as f64, y: 0.3, mult: 1 }).collect();
        let p = VortexProblem::new(grid, d, centers, bradlow_threshold(d, grid.vol())).unwrap();
        assert!(p.tau0().abs() < 1e-15);
    }
}

#[test]
fn constant_solution() {
    let mut p = VortexProblem::new(TorusGrid::new(32, 5.0).unwrap(), 0, vec![], 0.4).unwrap();
    p.amplitude = 3.0;
    let f = solve_vortex(&p, &VortexConfig::default()).unwrap();
    assert!(f.converged && f.residual_sup < 1e-12);
    let expected = 0.5 * (2.0 * 0.4 / 3.0f64).ln();
    assert!(f.u.iter().all(|x| (x - expected).abs() < 1e-12));
    assert!(quantization_check(&f, &p).unwrap() < 1e-12);
}

#[test]
fn solutions_exist_above_the_threshold() {
    let star = bradlow_threshold(-1, VOL);
    let cfg = VortexConfig::default();
    for delta in [0.05, 0.1, 0.25, 0.5] {
        let p = one_vortex(64, star + delta);
        let start = Instant::now();
        let f = solve_vortex(&p, &cfg).unwrap();
        let elapsed = start.elapsed().as_secs_f64();
        assert!(f.converged && f.residual_sup < 1e-8, "δ = {delta}: residual {:e}", f.residual_sup);
        assert!(elapsed < 10.0, "δ = {delta}: {elapsed:.1} s");
        assert!(quantization_check(&f, &p).unwrap() < 1e-8);
        let independent = oracle_residual(&p, &f.u);
        assert!(independent < 1e-8, "δ = {delta}: oracle residual {independent:e}");
        assert!((independent - f.residual_sup).abs() < 1e-9);
    }
}

#[test]
fn no_solution_below_the_threshold() {
    let star = bradlow_threshold(-1, VOL);
    for t in [star - 0.1, star, star - 5.0] {
        assert!(matches!(solve_vortex(&one_vortex(64, t), &VortexConfig::default()), Err(VortexError::Infeasible { .. })));
    }
    let rows = threshold_scan(&one_vortex(32, 0.0), &[star - 0.1, star + 0.25], &VortexConfig::default()).unwrap();
    assert!(!rows[0].converged && rows[0].residual.is_none());
    assert!(rows[1].converged);
}

#[test]
fn quantization_detects_perturbed_fields() {
    let p = one_vortex(64, bradlow_threshold(-1, VOL) + 0.5);
    let f = solve_vortex(&p, &VortexConfig::default()).unwrap();
    assert!(quantization_check(&f, &p).unwrap() < 1e-8);
    let shifted = VortexField { u: f.u.iter().map(|x| x + 0.1).collect(), ..f.clone() };
    let defect = quantization_check(&shifted, &p).unwrap();
    assert!(defect > 1e-3);
    // the mean scales by e^{0.2}
    assert!((defect - p.tau0() * (0.2f64.exp() - 1.0)).abs() < 1e-7);
    let unconverged = VortexField { converged: false, ..f };
    assert_eq!(quantization_check(&unconverged, &p), Err(VortexError::NotConverged));
}

#[test]
fn refinement_is_consistent() {
    let t = bradlow_threshold(-1, VOL) + 0.25;
    let cfg = VortexConfig::default();
    // a zero tolerance forces all three steps
    let forced = VortexConfig { tol: 0.0, ..cfg };
    for n in [16, 32] {
        let coarse = one_vortex(n, t);
        let f = solve_vortex(&coarse, &cfg).unwrap();
        assert!(f.converged);
        let fine = one_vortex(2 * n, t);
        let injected = spectral_upsample(coarse.grid, &f.u);
        let (_, before, _) = newton_steps(&fine, injected.clone(), 0, &forced).unwrap();
        let (_, after, taken) = newton_steps(&fine, injected, 3, &forced).unwrap();
        assert_eq!(taken, 3);
        assert!(before > 1e-10 && after < before, "N = {n}: {before:e} -> {after:e}");
    }
}

#[test]
fn several_vortices() {
    let grid = TorusGrid::new(64, 2.0 * PI).unwrap();
    let centers = vec![Center { x: 0.25, y: 0.25, mult: 2 }, Center { x: 0.7, y: 0.6, mult: 1 }];
    let p = VortexProblem::new(grid, -3, centers, bradlow_threshold(-3, VOL) + 0.3).unwrap();
    let f = solve_vortex(&p, &VortexConfig::default()).unwrap();
    assert!(f.converged);
    assert!(quantization_check(&f, &p).unwrap() < 1e-8);
    assert!(VortexProblem::new(grid, -2, vec![Center { x: 0.1, y: 0.1, mult: 1 }], 1.0).is_err());
}

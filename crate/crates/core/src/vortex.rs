//! Abelian rank-one vortices on a flat square torus.
//!
//! Writing the section as `φ = e^{u} φ₀` reduces the vortex equation to the scalar problem
//! `Δu = ½ B₀ e^{2u} − τ₀` with `τ₀ = t + 2πd/Vol`. Here `B₀` stands in for `|φ₀|²`: a product
//! of Gaussian wells of width `σ` vanishing at the `n = −d` prescribed centres. Integrating
//! the equation shows there is no solution for `τ₀ ≤ 0`, which is the threshold
//! `t* = −2πd/Vol`. Newton's method is run with a spectral Laplacian and a
//! Fourier-preconditioned conjugate-gradient inner solve.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VortexError {
    #[error("no solution: tau0 = t + 2*pi*d/Vol = {tau0} is not positive")]
    Infeasible { tau0: f64 },
    #[error("invalid vortex problem: {0}")]
    Invalid(String),
    #[error("field did not converge")]
    NotConverged,
}

/// `N × N` periodic grid on a torus of side `L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusGrid {
    pub n: usize,
    pub l: f64,
}

impl TorusGrid {
    pub fn new(n: usize, l: f64) -> Result<Self, VortexError> {
        if n < 16 || !n.is_power_of_two() {
            return Err(VortexError::Invalid(format!("N = {n} must be a power of two >= 16")));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(VortexError::Invalid(format!("L = {l} must be positive")));
        }
        Ok(TorusGrid { n, l })
    }

    pub fn vol(&self) -> f64 {
        self.l * self.l
    }

    pub fn h(&self) -> f64 {
        self.l / self.n as f64
    }
}

/// A zero of `φ₀` at fractional coordinates `(x, y) ∈ [0, 1)²` with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Center {
    pub x: f64,
    pub y: f64,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VortexProblem {
    pub grid: TorusGrid,
    pub d: i64,
    pub centers: Vec<Center>,
    pub t: f64,
    pub sigma: f64,
    /// Scale of `B₀` away from the centres.
    pub amplitude: f64,
}

impl VortexProblem {
    /// Default width `L/16` and unit amplitude.
    pub fn new(grid: TorusGrid, d: i64, centers: Vec<Center>, t: f64) -> Result<Self, VortexError> {
        let p = VortexProblem { grid, d, centers, t, sigma: grid.l / 16.0, amplitude: 1.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), VortexError> {
        if self.d > 0 {
            return Err(VortexError::Invalid(format!("degree d = {} must be <= 0", self.d)));
        }
        let total: i64 = self.centers.iter().map(|c| i64::from(c.mult)).sum();
        if total != -self.d {
            return Err(VortexError::Invalid(format!("multiplicities sum to {total}, expected {}", -self.d)));
        }
        if !(self.sigma > 0.0 && self.sigma < self.grid.l / 4.0) {
            return Err(VortexError::Invalid(format!("sigma = {} must lie in (0, L/4)", self.sigma)));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(VortexError::Invalid("amplitude must be positive".into()));
        }
        if !self.t.is_finite() {
            return Err(VortexError::Invalid("t must be finite".into()));
        }
        Ok(())
    }

    /// `τ₀ = t + 2πd/Vol`.
    pub fn tau0(&self) -> f64 {
        self.t + 2.0 * PI * self.d as f64 / self.grid.vol()
    }

    /// `B₀` on the grid, row-major with `x` along rows.
    pub fn b0(&self) -> Vec<f64> {
        let TorusGrid { n, l } = self.grid;
        let h = self.grid.h();
        let wrap = |s: f64| s - l * (s / l).round();
        let mut out = vec![self.amplitude; n * n];
        for (idx, b) in out.iter_mut().enumerate() {
            let (x, y) = ((idx / n) as f64 * h, (idx % n) as f64 * h);
            for c in &self.centers {
                let (dx, dy) = (wrap(x - c.x * l), wrap(y - c.y * l));
                let well = 1.0 - (-(dx * dx + dy * dy) / (2.0 * self.sigma * self.sigma)).exp();
                *b *= well.powi(c.mult as i32);
            }
        }
        out
    }
}

/// `t* = −2πd/Vol`; solutions exist exactly for `t > t*`.
pub fn bradlow_threshold(d: i64, vol: f64) -> f64 {
    -2.0 * PI * d as f64 / vol
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VortexConfig {
    pub tol: f64,
    pub max_newton: usize,
    /// Step shrink factor of the backtracking line search.
    pub damping: f64,
    pub max_cg: usize,
}

impl Default for VortexConfig {
    fn default() -> Self {
        VortexConfig { tol: 1e-8, max_newton: 60, damping: 0.8, max_cg: 2000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VortexField {
    pub n: usize,
    /// Row-major `N × N` values.
    pub u: Vec<f64>,
    pub residual_sup: f64,
    pub converged: bool,
    pub tau0: f64,
    pub iterations: usize,
}

/// FFT plans and symbols for one grid.
struct Spectral {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// `|k|²` per mode, row-major.
    k2: Vec<f64>,
}

impl Spectral {
    fn new(grid: TorusGrid) -> Self {
        let n = grid.n;
        let mut planner = FftPlanner::new();
        let freq = |i: usize| {
            let s = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
            2.0 * PI * s / grid.l
        };
        let k2 = (0..n * n).map(|idx| freq(idx / n).powi(2) + freq(idx % n).powi(2)).collect();
        Spectral { n, fwd: planner.plan_fft_forward(n), inv: planner.plan_fft_inverse(n), k2 }
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        plan.process(data);
        transpose(data, n);
        plan.process(data);
        transpose(data, n);
    }

    fn forward(&self, u: &[f64]) -> Vec<Complex64> {
        let mut c: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.transform(&mut c, &self.fwd);
        c
    }

    fn inverse(&self, mut c: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut c, &self.inv);
        let scale = 1.0 / (self.n * self.n) as f64;
        c.into_iter().map(|z| z.re * scale).collect()
    }

    fn laplacian(&self, u: &[f64]) -> Vec<f64> {
        let mut c = self.forward(u);
        for (z, k2) in c.iter_mut().zip(&self.k2) {
            *z *= -k2;
        }
        self.inverse(c)
    }

    /// `(−Δ + w)⁻¹` for a constant `w > 0`.
    fn shifted_inverse(&self, r: &[f64], w: f64) -> Vec<f64> {
        let mut c = self.forward(r);
        for (z, k2) in c.iter_mut().zip(&self.k2) {
            *z /= k2 + w;
        }
        self.inverse(c)
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sup(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `F(u) = Δu − ½B₀e^{2u} + τ₀`.
fn residual(sp: &Spectral, b0: &[f64], tau0: f64, u: &[f64]) -> Vec<f64> {
    let lap = sp.laplacian(u);
    lap.iter().zip(b0).zip(u).map(|((l, b), x)| l - 0.5 * b * (2.0 * x).exp() + tau0).collect()
}

/// Preconditioned CG for `(−Δ + W) δ = f` with `W ≥ 0`, `W ≢ 0`.
fn solve_linearized(sp: &Spectral, w: &[f64], f: &[f64], max_iter: usize) -> Vec<f64> {
    let wbar = w.iter().sum::<f64>() / w.len() as f64;
    let apply = |x: &[f64]| -> Vec<f64> {
        let lap = sp.laplacian(x);
        lap.iter().zip(w).zip(x).map(|((l, wi), xi)| -l + wi * xi).collect()
    };
    let mut x = vec![0.0; f.len()];
    let mut r = f.to_vec();
    let mut z = sp.shifted_inverse(&r, wbar);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let target = 1e-13 * dot(f, f).sqrt();
    for _ in 0..max_iter {
        if dot(&r, &r).sqrt() <= target {
            break;
        }
        let ap = apply(&p);
        let alpha = rz / dot(&p, &ap);
        for i in 0..x.len() {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        z = sp.shifted_inverse(&r, wbar);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..p.len() {
            p[i] = z[i] + beta * p[i];
        }
    }
    x
}

/// Newton iterations from `u`, stopping at `tol` or after `steps`. Returns the iterate, its
/// sup residual and the number of steps taken.
pub fn newton_steps(
    p: &VortexProblem,
    u: Vec<f64>,
    steps: usize,
    cfg: &VortexConfig,
) -> Result<(Vec<f64>, f64, usize), VortexError> {
    p.validate()?;
    let n = p.grid.n;
    if u.len() != n * n {
        return Err(VortexError::Invalid(format!("field has {} values, expected {}", u.len(), n * n)));
    }
    let tau0 = p.tau0();
    let sp = Spectral::new(p.grid);
    let b0 = p.b0();
    let mut u = u;
    let mut f = residual(&sp, &b0, tau0, &u);
    let mut res = sup(&f);
    let mut taken = 0;
    while taken < steps && res >= cfg.tol {
        let w: Vec<f64> = b0.iter().zip(&u).map(|(b, x)| b * (2.0 * x).exp()).collect();
        let delta = solve_linearized(&sp, &w, &f, cfg.max_cg);
        let norm = dot(&f, &f);
        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = u.iter().zip(&delta).map(|(x, dx)| x + lambda * dx).collect();
            let ft = residual(&sp, &b0, tau0, &trial);
            if dot(&ft, &ft) < norm || lambda < 1e-6 {
                u = trial;
                f = ft;
                break;
            }
            lambda *= cfg.damping;
        }
        res = sup(&f);
        taken += 1;
        log::debug!("newton step {taken}: residual {res:.3e}");
    }
    Ok((u, res, taken))
}

/// Damped Newton from the constant `u₀ = ½ ln(2τ₀ / mean B₀)`.
pub fn solve_vortex(p: &VortexProblem, cfg: &VortexConfig) -> Result<VortexField, VortexError> {
    p.validate()?;
    let tau0 = p.tau0();
    if tau0 <= 0.0 {
        return Err(VortexError::Infeasible { tau0 });
    }
    let n = p.grid.n;
    let b0 = p.b0();
    let mean_b = b0.iter().sum::<f64>() / b0.len() as f64;
    let u0 = vec![0.5 * (2.0 * tau0 / mean_b).ln(); n * n];
    let (u, residual_sup, iterations) = newton_steps(p, u0, cfg.max_newton, cfg)?;
    let converged = residual_sup.is_finite() && residual_sup < cfg.tol;
    Ok(VortexField { n, u, residual_sup, converged, tau0, iterations })
}

/// `|mean(½B₀e^{2u}) − τ₀|`, the integrated form of the equation.
pub fn quantization_check(f: &VortexField, p: &VortexProblem) -> Result<f64, VortexError> {
    if !f.converged {
        return Err(VortexError::NotConverged);
    }
    if f.n != p.grid.n || f.u.len() != f.n * f.n {
        return Err(VortexError::Invalid("field does not match the grid".into()));
    }
    let b0 = p.b0();
    let mean = b0.iter().zip(&f.u).map(|(b, x)| 0.5 * b * (2.0 * x).exp()).sum::<f64>() / b0.len() as f64;
    Ok((mean - p.tau0()).abs())
}

/// Trigonometric interpolation of a field on `grid` to the grid of twice the resolution.
pub fn spectral_upsample(grid: TorusGrid, u: &[f64]) -> Vec<f64> {
    let n = grid.n;
    let m = 2 * n;
    let coarse = Spectral::new(grid);
    let fine = Spectral::new(TorusGrid { n: m, l: grid.l });
    let c = coarse.forward(u);
    let mut big = vec![Complex64::new(0.0, 0.0); m * m];
    // split the Nyquist modes evenly so the interpolant stays real
    let targets = |i: usize| -> Vec<(usize, f64)> {
        match i.cmp(&(n / 2)) {
            std::cmp::Ordering::Less => vec![(i, 1.0)],
            std::cmp::Ordering::Equal => vec![(n / 2, 0.5), (m - n / 2, 0.5)],
            std::cmp::Ordering::Greater => vec![(i + n, 1.0)],
        }
    };
    for i in 0..n {
        for j in 0..n {
            for &(bi, wi) in &targets(i) {
                for &(bj, wj) in &targets(j) {
                    big[bi * m + bj] += c[i * n + j] * (wi * wj * 4.0);
                }
            }
        }
    }
    fine.inverse(big)
}

/// One row of a threshold scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub t: f64,
    pub converged: bool,
    pub residual: Option<f64>,
    pub iterations: usize,
}

/// Solves independently at each `t`; infeasible parameters give `converged = false` and no
/// residual.
pub fn threshold_scan(base: &VortexProblem, ts: &[f64], cfg: &VortexConfig) -> Result<Vec<ScanRow>, VortexError> {
    ts.par_iter()
        .map(|&t| {
            let p = VortexProblem { t, ..base.clone() };
            match solve_vortex(&p, cfg) {
                Ok(f) => Ok(ScanRow { t, converged: f.converged, residual: Some(f.residual_sup), iterations: f.iterations }),
                Err(VortexError::Infeasible { .. }) => Ok(ScanRow { t, converged: false, residual: None, iterations: 0 }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::moment::{act, energy, exp_act, infinitesimal_action, level_values, min_singular_value, moment_blocks};
use super::{Level, QuiverError, QuiverPoint, QuiverProblem, SymmetrySpec};
use crate::linalg::FloatMatrix;
use crate::StabilityVerdict;

/// Smallest singular value of the infinitesimal action above which the stabilizer of a
/// zero of the moment map is taken to be finite.
pub const STABILIZER_THRESHOLD: f64 = 1e-6;

const ARMIJO: f64 = 1e-4;
const PLATEAU_WINDOW: usize = 100;
const PLATEAU_RELATIVE: f64 = 1e-14;
/// Accepted steps may grow up to this multiple of the configured step.
const STEP_GROWTH_CAP: f64 = 1e6;
const MAX_HALVINGS: usize = 80;
/// An energy flat to rounding accuracy over this many steps marks a critical point. Waiting
/// longer lets rounding errors grow along directions the group stretches without bound.
const FLAT_WINDOW: usize = 10;
const FLAT_RELATIVE: f64 = 4.0 * f64::EPSILON;
/// First iteration at which the limit energy is extrapolated; later checks double it.
const EXTRAPOLATION_START: usize = 1000;
/// `E_k − STALL_FACTOR·(E_{k/2} − E_k)` bounds the limit from below whenever
/// `E_k − E_∞` decays at least like `k^{−1/3}`.
const STALL_FACTOR: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub step: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig { step: 0.1, max_iter: 100_000, tol: 1e-8, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Energy fell below `tol²`.
    Converged,
    /// The gradient vanished exactly (a critical point of the energy).
    Stationary,
    /// Relative energy decrease was below `1e−14` over 100 steps or below `4ε` over 10
    /// steps, or no step length gave sufficient decrease.
    Plateau,
    /// Two successive lower extrapolations of the limit energy stayed above `10·tol²`.
    Stalled,
    MaxIter,
    /// The energy became non-finite.
    Diverged,
}

#[derive(Clone, Debug)]
pub struct FlowResult {
    pub final_point: QuiverPoint,
    pub final_energy: f64,
    pub iterations: usize,
    pub verdict: StabilityVerdict,
    pub stop: StopReason,
    /// Smallest singular value of the infinitesimal action at the limit, when computed.
    pub min_singular_value: Option<f64>,
    /// Energy after each accepted step, starting with the initial energy.
    pub energy_trace: Vec<f64>,
    /// Upper bound on the log condition number of the group element carrying the start
    /// to the final point.
    pub log_growth: f64,
}

/// Bound on `λ_max − λ_min` over the blocks of `μ`, which bounds the log condition number
/// of `exp(−μ)` on each vertex. Torus actions are diagonal and never mix coordinates.
fn spread_bound(prob: &QuiverProblem, mu: &[FloatMatrix]) -> f64 {
    if matches!(prob.symmetry, SymmetrySpec::TorusKernel(_)) {
        return 0.0;
    }
    mu.iter()
        .map(|m| {
            let n = m.rows() as f64;
            let tr = m.trace().re;
            (2.0 * (m.norm_sqr() - tr * tr / n)).max(0.0).sqrt()
        })
        .fold(0.0, f64::max)
}

/// Gradient descent for `E(p) = ‖μ(p)‖²` along complexified orbits.
///
/// The gradient of `E` is `2 A_{μ(p)} p`, so each step replaces `p` by
/// `exp(−2η A_{μ(p)}) p`, which keeps the iterate on its orbit. Step lengths follow Armijo
/// backtracking; after an accepted step the next trial step doubles.
pub fn kempf_ness_flow(
    prob: &QuiverProblem,
    p: &QuiverPoint,
    lvl: &Level,
    cfg: &FlowConfig,
) -> Result<FlowResult, QuiverError> {
    prob.check_point(p)?;
    prob.check_level(lvl)?;
    let level = level_values(lvl);
    let tol2 = cfg.tol * cfg.tol;
    let max_step = cfg.step * STEP_GROWTH_CAP;

    let mut maps = p.to_float();
    let mut mu = moment_blocks(prob, &maps, &level);
    let mut e = energy(&mu);
    let mut trace = vec![e];
    let mut eta = cfg.step;
    let mut iterations = 0;
    let mut next_check = EXTRAPOLATION_START;
    let mut stalled_once = false;
    let mut log_growth = 0.0;

    let stop = loop {
        if !e.is_finite() {
            break StopReason::Diverged;
        }
        if e < tol2 {
            break StopReason::Converged;
        }
        if iterations >= cfg.max_iter {
            break StopReason::MaxIter;
        }
        if iterations == next_check {
            let bound = e - STALL_FACTOR * (trace[iterations / 2] - e);
            if bound > 10.0 * tol2 && stalled_once {
                break StopReason::Stalled;
            }
            stalled_once = bound > 10.0 * tol2;
            next_check *= 2;
        }
        if trace.len() > PLATEAU_WINDOW {
            let old = trace[trace.len() - 1 - PLATEAU_WINDOW];
            if old - e < PLATEAU_RELATIVE * old {
                break StopReason::Plateau;
            }
        }
        if trace.len() > FLAT_WINDOW {
            let old = trace[trace.len() - 1 - FLAT_WINDOW];
            if old - e <= FLAT_RELATIVE * old {
                break StopReason::Plateau;
            }
        }
        let grad_half: f64 = act(prob, &mu, &maps).iter().map(FloatMatrix::norm_sqr).sum();
        if grad_half == 0.0 {
            break StopReason::Stationary;
        }
        // ‖∇E‖² = 4 ‖A_μ p‖²
        let slope = 4.0 * grad_half;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial = exp_act(prob, &mu, 2.0 * eta, &maps)?;
            let trial_mu = moment_blocks(prob, &trial, &level);
            let trial_e = energy(&trial_mu);
            if trial_e.is_finite() && trial_e <= e - ARMIJO * eta * slope {
                accepted = Some((trial, trial_mu, trial_e));
                break;
            }
            eta *= 0.5;
        }
        let Some((next, next_mu, next_e)) = accepted else {
            break StopReason::Plateau;
        };
        log_growth += 2.0 * eta * spread_bound(prob, &mu);
        maps = next;
        mu = next_mu;
        e = next_e;
        trace.push(e);
        iterations += 1;
        eta = (2.0 * eta).min(max_step);
    };

    let mut result = FlowResult {
        final_point: QuiverPoint::from_float(maps),
        final_energy: e,
        iterations,
        verdict: StabilityVerdict::Borderline,
        stop,
        min_singular_value: None,
        energy_trace: trace,
        log_growth,
    };
    result.verdict = classify(prob, &mut result, tol2);
    Ok(result)
}

fn classify(prob: &QuiverProblem, r: &mut FlowResult, tol2: f64) -> StabilityVerdict {
    match r.stop {
        // past `−ln ε` rounding errors may have grown to order one along the orbit
        StopReason::Converged if r.log_growth > -f64::EPSILON.ln() => StabilityVerdict::Borderline,
        StopReason::Converged => {
            let s = min_singular_value(&infinitesimal_action(prob, &r.final_point.to_float()));
            r.min_singular_value = Some(s);
            if s > STABILIZER_THRESHOLD {
                StabilityVerdict::Stable
            } else {
                StabilityVerdict::StrictlySemistable
            }
        }
        StopReason::Diverged => StabilityVerdict::Unstable,
        StopReason::Stationary | StopReason::Plateau | StopReason::Stalled if r.final_energy > 10.0 * tol2 => StabilityVerdict::Unstable,
        _ => StabilityVerdict::Borderline,
    }
}

/// Runs [`kempf_ness_flow`] and returns its verdict.
pub fn numerical_stability_verdict(
    prob: &QuiverProblem,
    p: &QuiverPoint,
    lvl: &Level,
    cfg: &FlowConfig,
) -> Result<StabilityVerdict, QuiverError> {
    Ok(kempf_ness_flow(prob, p, lvl, cfg)?.verdict)
}

/// Norm below which a flow limit is treated as the origin.
const ORIGIN_RADIUS: f64 = 1e-2;

/// Searches for a nonzero zero of the level-zero moment map from `trials` random unit-norm
/// starts. A returned point (renormalised to unit norm) refutes properness; `None` proves
/// nothing.
pub fn properness_refuter(
    prob: &QuiverProblem,
    cfg: &FlowConfig,
    trials: usize,
) -> Result<Option<QuiverPoint>, QuiverError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let level = prob.zero_level();
    for _ in 0..trials {
        let start = prob.random_unit_point(&mut rng);
        let flow = kempf_ness_flow(prob, &start, &level, cfg)?;
        let norm = flow.final_point.norm_sqr().sqrt();
        if flow.stop == StopReason::Converged && norm > ORIGIN_RADIUS {
            let scale = num_complex::Complex64::from(1.0 / norm);
            let maps = flow.final_point.to_float().iter().map(|m| m.scale(&scale)).collect();
            return Ok(Some(QuiverPoint::from_float(maps)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ExactMatrix};

    #[test]
    fn scalar_grassmann_flows_to_the_circle() {
        let prob = QuiverProblem::grassmann(1, 1).unwrap();
        let p = QuiverPoint::from_exact(vec![ExactMatrix::from_ints(1, 1, &[1])]);
        let res = kempf_ness_flow(&prob, &p, &Level::Vertex(vec![rat(1, 2)]), &FlowConfig::default()).unwrap();
        // already at |z|² = 2t
        assert!(res.final_energy < 1e-16);
        let res = kempf_ness_flow(&prob, &p, &Level::Vertex(vec![rat(3, 2)]), &FlowConfig::default()).unwrap();
        assert_eq!(res.stop, StopReason::Converged);
        let z = res.final_point.to_float()[0].get(0, 0).norm_sqr();
        assert!((z - 3.0).abs() < 1e-7);
        assert_eq!(res.verdict, StabilityVerdict::Stable);
    }

    #[test]
    fn origin_is_a_fixed_point() {
        let prob = QuiverProblem::grassmann(1, 1).unwrap();
        let res = kempf_ness_flow(&prob, &prob.zero_point(), &Level::Vertex(vec![rat(1, 2)]), &FlowConfig::default())
            .unwrap();
        assert_eq!(res.stop, StopReason::Stationary);
        assert_eq!(res.final_energy, 0.25);
        assert_eq!(res.verdict, StabilityVerdict::Unstable);
    }

    #[test]
    fn energy_never_increases() {
        let prob = QuiverProblem::flag_chain(&[2, 3, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = prob.random_unit_point(&mut rng);
        let res = kempf_ness_flow(&prob, &p, &Level::Vertex(vec![rat(1, 1), rat(2, 1)]), &FlowConfig::default())
            .unwrap();
        assert!(res.energy_trace.windows(2).all(|w| w[1] <= w[0]));
    }
}

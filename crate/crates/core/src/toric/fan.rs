use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ToricError, ToricMatrix};
use crate::linalg::{ExactMatrix, GaussRat};
use crate::lp::{LinearProgram, Relation};

/// Number of deterministic directions tested for coverage in [`validate_fan`].
pub const COVERAGE_SAMPLES: usize = 1000;
const COVERAGE_SEED: u64 = 0x5eed_fa17;

/// A fan given by its maximal cones, each a sorted set of 0-based column indices.
///
/// JSON uses 1-based indices: `{"max_cones": [[1], [2]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FanFile", into = "FanFile")]
pub struct Fan {
    max_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FanFile {
    max_cones: Vec<Vec<usize>>,
}

impl TryFrom<FanFile> for Fan {
    type Error = ToricError;
    fn try_from(f: FanFile) -> Result<Self, ToricError> {
        if f.max_cones.iter().flatten().any(|&j| j == 0) {
            return Err(ToricError::Invalid("fan ray indices are 1-based".into()));
        }
        Ok(Fan::new(f.max_cones.into_iter().map(|c| c.into_iter().map(|j| j - 1).collect()).collect()))
    }
}

impl From<Fan> for FanFile {
    fn from(f: Fan) -> Self {
        FanFile { max_cones: f.max_cones.into_iter().map(|c| c.into_iter().map(|j| j + 1).collect()).collect() }
    }
}

impl Fan {
    /// Cones are sorted and deduplicated.
    pub fn new(max_cones: Vec<Vec<usize>>) -> Self {
        let mut max_cones: Vec<Vec<usize>> = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        max_cones.sort();
        max_cones.dedup();
        Fan { max_cones }
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Every face of every maximal cone, the empty cone included.
    pub fn cones(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .max_cones
            .iter()
            .flat_map(|c| (0..=c.len()).flat_map(move |k| c.iter().copied().combinations(k)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Indices used as rays.
    pub fn rays(&self) -> Vec<usize> {
        self.max_cones.iter().flatten().copied().sorted().dedup().collect()
    }

    fn check_indices(&self, v: &ToricMatrix) -> Result<(), ToricError> {
        match self.max_cones.iter().flatten().find(|&&j| j >= v.r()) {
            Some(j) => Err(ToricError::Dimension(format!("ray index {} exceeds r = {}", j + 1, v.r()))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanValidation {
    pub simplicial: bool,
    pub is_fan: bool,
    pub complete: bool,
}

pub(crate) fn ri(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

pub(crate) fn is_independent(v: &ToricMatrix, cone: &[usize]) -> bool {
    v.generators(cone).rank() == cone.len()
}

/// Whether `cone(σ) ∩ cone(τ) = cone(σ ∩ τ)` for simplicial `σ, τ`: maximise the weight a
/// common point puts on rays outside the shared face, normalised by `Σλ + Σμ ≤ 1`.
pub(crate) fn meet_properly(v: &ToricMatrix, s: &[usize], t: &[usize]) -> bool {
    let n = s.len() + t.len();
    let mut lp = LinearProgram::new(n);
    for i in 0..v.m() {
        let row: Vec<BigRational> =
            s.iter().map(|&j| ri(v.entry(i, j))).chain(t.iter().map(|&j| -ri(v.entry(i, j)))).collect();
        lp.constrain(row, Relation::Eq, BigRational::zero());
    }
    lp.constrain(vec![ri(1); n], Relation::Le, ri(1));
    let obj = s.iter().map(|j| ri(i64::from(!t.contains(j)))).chain(t.iter().map(|j| ri(i64::from(!s.contains(j)))));
    lp.maximize(obj.collect());
    lp.solve().optimal().is_some_and(|(value, _)| value.is_zero())
}

/// Simplicial, fan and completeness checks. Completeness combines the ridge criterion
/// (all maximal cones full-dimensional, every ridge in exactly two of them, connected
/// adjacency) with coverage of deterministic sampled directions.
pub fn validate_fan(fan: &Fan, v: &ToricMatrix) -> Result<FanValidation, ToricError> {
    fan.check_indices(v)?;
    let cones = fan.max_cones();
    let simplicial = cones.iter().all(|c| is_independent(v, c));
    let is_fan = simplicial && cones.iter().tuple_combinations().all(|(s, t)| meet_properly(v, s, t));
    let complete = is_fan && !cones.is_empty() && ridge_criterion(cones, v.m()) && covers_samples(fan, v);
    Ok(FanValidation { simplicial, is_fan, complete })
}

fn ridge_criterion(cones: &[Vec<usize>], m: usize) -> bool {
    if cones.iter().any(|c| c.len() != m) {
        return false;
    }
    let mut adjacency = vec![Vec::new(); cones.len()];
    for (a, c) in cones.iter().enumerate() {
        for ridge in c.iter().copied().combinations(m - 1) {
            let holders: Vec<usize> =
                (0..cones.len()).filter(|&b| ridge.iter().all(|j| cones[b].contains(j))).collect();
            if holders.len() != 2 {
                return false;
            }
            adjacency[a].extend(holders.into_iter().filter(|&b| b != a));
        }
    }
    let mut seen = vec![false; cones.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(a) = stack.pop() {
        for &b in &adjacency[a] {
            if !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Whether `d` lies in the simplicial cone `σ` (`σ` has `m` independent rays).
pub(crate) fn cone_contains(v: &ToricMatrix, cone: &[usize], d: &[i64]) -> bool {
    let gens = v.generators(cone);
    let rhs: Vec<GaussRat> = d.iter().map(|&x| GaussRat::from_int(x)).collect();
    match gens.solve(&rhs) {
        Ok(lambda) => lambda.iter().all(|l| !l.re.is_negative()),
        Err(_) => false,
    }
}

fn covers_samples(fan: &Fan, v: &ToricMatrix) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(COVERAGE_SEED);
    (0..COVERAGE_SAMPLES).all(|_| {
        let d: Vec<i64> = loop {
            let d: Vec<i64> = (0..v.m()).map(|_| rng.gen_range(-1000..=1000)).collect();
            if d.iter().any(|&x| x != 0) {
                break d;
            }
        };
        fan.max_cones().iter().any(|c| cone_contains(v, c, &d))
    })
}

/// The functional `f` on `span(σ)` with `⟨f, v_j⟩ = −a_j` for every ray `j` of `σ`, written
/// as a vector of `ℚ^m` lying in that span.
pub fn face_functional(cone: &[usize], a: &[BigRational], v: &ToricMatrix) -> Result<Vec<BigRational>, ToricError> {
    if a.len() != v.r() {
        return Err(ToricError::Dimension(format!("level has length {}, expected {}", a.len(), v.r())));
    }
    if let Some(j) = cone.iter().find(|&&j| j >= v.r()) {
        return Err(ToricError::Dimension(format!("ray index {} exceeds r = {}", j + 1, v.r())));
    }
    let g = v.generators(cone);
    let gram = g.transpose().mul(&g).expect("shapes");
    let inv = gram.inverse().map_err(|_| ToricError::Invalid("cone is not simplicial".into()))?;
    let rhs: Vec<GaussRat> = cone.iter().map(|&j| GaussRat::real(-a[j].clone())).collect();
    let coeff = inv.mul_vec(&rhs).expect("shapes");
    Ok(g.mul_vec(&coeff).expect("shapes").into_iter().map(|x| x.re).collect())
}

/// `⟨f_σ^a, v_j⟩ + a_j` for a full-dimensional simplicial `σ` and every `j`.
pub(crate) fn slack_values(cone: &[usize], a: &[BigRational], v: &ToricMatrix) -> Result<Vec<BigRational>, ToricError> {
    let f = face_functional(cone, a, v)?;
    Ok((0..v.r())
        .map(|j| {
            let pairing: BigRational = (0..v.m()).map(|i| &f[i] * ri(v.entry(i, j))).sum();
            pairing + &a[j]
        })
        .collect())
}

/// Determinant of the square integer matrix with columns `cols`.
pub(crate) fn det_of(v: &ToricMatrix, cols: &[usize], extra: Option<usize>) -> BigRational {
    let idx: Vec<usize> = cols.iter().copied().chain(extra).collect();
    let g: ExactMatrix = v.generators(&idx);
    g.determinant().expect("square").re
}

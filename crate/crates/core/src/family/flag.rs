use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::FamilyError;
use crate::linalg::{rational_from_value, CMatrix, ExactMatrix, GaussRat, HermitianTuple};
use crate::quiver::{Level, QuiverPoint, QuiverProblem};
use crate::StabilityVerdict;

/// Maps `f_i: V_i → V_{i+1}` (`d_{i+1} × d_i`) with levels `t_1, …, t_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagChain {
    dims: Vec<usize>,
    maps: Vec<ExactMatrix>,
    levels: Vec<BigRational>,
}

impl FlagChain {
    pub fn new(dims: Vec<usize>, maps: Vec<ExactMatrix>, levels: Vec<BigRational>) -> Result<Self, FamilyError> {
        if dims.len() < 2 {
            return Err(FamilyError::Dimension("a flag chain needs at least two spaces".into()));
        }
        let m = dims.len() - 1;
        if maps.len() != m || levels.len() != m {
            return Err(FamilyError::Dimension(format!(
                "{m} maps and levels expected, got {} and {}",
                maps.len(),
                levels.len()
            )));
        }
        if dims.contains(&0) {
            return Err(FamilyError::Dimension("dimensions must be positive".into()));
        }
        for (i, f) in maps.iter().enumerate() {
            if f.shape() != (dims[i + 1], dims[i]) {
                return Err(FamilyError::Dimension(format!(
                    "f_{} is {:?}, expected {:?}",
                    i + 1,
                    f.shape(),
                    (dims[i + 1], dims[i])
                )));
            }
        }
        Ok(FlagChain { dims, maps, levels })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[ExactMatrix] {
        &self.maps
    }

    pub fn levels(&self) -> &[BigRational] {
        &self.levels
    }

    /// The chain as a quiver problem, point and level.
    pub fn to_quiver(&self) -> Result<(QuiverProblem, QuiverPoint, Level), FamilyError> {
        let prob = QuiverProblem::flag_chain(&self.dims)?;
        Ok((prob, QuiverPoint::from_exact(self.maps.clone()), Level::Vertex(self.levels.clone())))
    }
}

/// A one-parameter destabilizer: `ξ` and the value of `⟨t, ξ⟩ = Σ t_i Tr(ξ_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DestabilizerWitness {
    pub xi: HermitianTuple,
    pub pairing: BigRational,
}

/// Exact stability of a flag chain with positive levels: stable iff every `f_i` is
/// injective. For the first non-injective `f_i` the witness is `ξ_i = −pr_{ker f_i}`,
/// `ξ_j = 0` otherwise, with pairing `−t_i dim ker f_i`.
pub fn flag_stable(c: &FlagChain) -> Result<(StabilityVerdict, Option<DestabilizerWitness>), FamilyError> {
    if let Some((i, t)) = c.levels.iter().enumerate().find(|(_, t)| !t.is_positive()) {
        return Err(FamilyError::NonPositiveLevel { index: i + 1, value: crate::linalg::format_rational(t) });
    }
    for (i, f) in c.maps.iter().enumerate() {
        let kernel = f.kernel();
        if kernel.is_empty() {
            continue;
        }
        let basis = ExactMatrix::from_columns(c.dims[i], &kernel);
        let proj = basis.projector_onto_columns()?;
        let blocks = (0..c.maps.len())
            .map(|j| {
                let n = c.dims[j];
                CMatrix::Exact(if j == i { proj.scale(&GaussRat::from_int(-1)) } else { ExactMatrix::zeros(n, n) })
            })
            .collect();
        let pairing = -(&c.levels[i] * BigRational::from_integer(kernel.len().into()));
        return Ok((StabilityVerdict::Unstable, Some(DestabilizerWitness { xi: HermitianTuple::new(blocks)?, pairing })));
    }
    Ok((StabilityVerdict::Stable, None))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientType {
    Grassmannian,
    Point,
    Empty,
}

/// The symplectic quotient of the Grassmann problem at level `t`.
pub fn grassmann_quotient_type(t: &BigRational) -> QuotientType {
    if t.is_positive() {
        QuotientType::Grassmannian
    } else if t.is_zero() {
        QuotientType::Point
    } else {
        QuotientType::Empty
    }
}

/// File form: `{"dims": [..], "maps": [matrix, ..], "levels": ["p/q", ..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagFile {
    pub dims: Vec<usize>,
    pub maps: Vec<ExactMatrix>,
    pub levels: Vec<Value>,
}

impl FlagFile {
    pub fn chain(&self) -> Result<FlagChain, FamilyError> {
        let levels = self.levels.iter().map(rational_from_value).collect::<Result<_, _>>()?;
        // empty matrices carry no shape in JSON
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, f)| match (f.rows(), self.dims.get(i), self.dims.get(i + 1)) {
                (0, Some(&c), Some(&r)) => ExactMatrix::zeros(r, c),
                _ => f.clone(),
            })
            .collect();
        FlagChain::new(self.dims.clone(), maps, levels)
    }
}

impl From<&FlagChain> for FlagFile {
    fn from(c: &FlagChain) -> Self {
        FlagFile {
            dims: c.dims.clone(),
            maps: c.maps.clone(),
            levels: c.levels.iter().map(|t| Value::String(crate::linalg::format_rational(t))).collect(),
        }
    }
}

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::fan::{det_of, is_independent, meet_properly, slack_values, validate_fan};
use super::{quotient_nonempty, Fan, ToricError, ToricMatrix};

pub const MAX_CHAMBER_R: usize = 12;
pub const MAX_CHAMBER_M: usize = 3;

/// A complete simplicial fan `Σ` on the columns of `v` with the class of `a` in `K₀(Σ)`,
/// or `None` if there is none.
///
/// Candidate maximal cones are the independent `m`-subsets whose strict inequalities hold
/// at `a`; a backtracking search glues them across ridges until every ridge is shared.
pub fn chamber_fan_search(v: &ToricMatrix, a: &[BigRational]) -> Result<Option<Fan>, ToricError> {
    if v.r() > MAX_CHAMBER_R || v.m() > MAX_CHAMBER_M {
        return Err(ToricError::Limits(format!(
            "chamber search supports r <= {MAX_CHAMBER_R} and m <= {MAX_CHAMBER_M}, got r = {} and m = {}",
            v.r(),
            v.m()
        )));
    }
    if !quotient_nonempty(v, a)? {
        return Ok(None);
    }
    let mut good = Vec::new();
    for c in (0..v.r()).combinations(v.m()) {
        if !is_independent(v, &c) {
            continue;
        }
        let slack = slack_values(&c, a, v)?;
        if (0..v.r()).filter(|j| !c.contains(j)).all(|j| slack[j].is_positive()) {
            good.push(c);
        }
    }
    let mut search = Search { v, good: &good, chosen: Vec::new() };
    for start in 0..good.len() {
        search.chosen = vec![start];
        if search.extend()? {
            return Ok(Some(Fan::new(search.chosen.iter().map(|&i| good[i].clone()).collect())));
        }
    }
    Ok(None)
}

struct Search<'a> {
    v: &'a ToricMatrix,
    good: &'a [Vec<usize>],
    chosen: Vec<usize>,
}

impl Search<'_> {
    /// A ridge lying in exactly one chosen cone, with the ray of that cone opposite it.
    fn open_ridge(&self) -> Option<(Vec<usize>, usize)> {
        for &c in &self.chosen {
            let cone = &self.good[c];
            for &i in cone {
                let ridge: Vec<usize> = cone.iter().copied().filter(|&j| j != i).collect();
                let holders = self.chosen.iter().filter(|&&d| ridge.iter().all(|j| self.good[d].contains(j))).count();
                if holders == 1 {
                    return Some((ridge, i));
                }
            }
        }
        None
    }

    fn extend(&mut self) -> Result<bool, ToricError> {
        let Some((ridge, i)) = self.open_ridge() else {
            let fan = Fan::new(self.chosen.iter().map(|&c| self.good[c].clone()).collect());
            return Ok(validate_fan(&fan, self.v)?.complete);
        };
        let side = det_of(self.v, &ridge, Some(i));
        for cand in 0..self.good.len() {
            if self.chosen.contains(&cand) {
                continue;
            }
            let cone = &self.good[cand];
            if !ridge.iter().all(|j| cone.contains(j)) {
                continue;
            }
            let k = *cone.iter().find(|j| !ridge.contains(j)).expect("m-subset extends a ridge");
            let other = det_of(self.v, &ridge, Some(k));
            if other.is_zero() || other.is_positive() == side.is_positive() {
                continue;
            }
            if !self.chosen.iter().all(|&d| meet_properly(self.v, &self.good[d], cone)) {
                continue;
            }
            self.chosen.push(cand);
            if self.extend()? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fan::{is_independent, ri, slack_values};
use super::{Fan, ToricError, ToricMatrix};
use crate::linalg::ExactMatrix;
use crate::lp::{LinearProgram, Relation};

/// Primitivity of the columns; `offending_column` is 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct P1Report {
    pub holds: bool,
    pub offending_column: Option<usize>,
}

/// Absence of a nonzero `x ≥ 0` in `im(vᵀ)`; otherwise `certificate` is such an `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct P2Report {
    pub holds: bool,
    pub certificate: Option<Vec<BigRational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KMembership {
    pub in_k: bool,
    pub in_k0: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Semistability {
    pub semistable: bool,
    pub stable: bool,
}

pub fn check_p1(v: &ToricMatrix) -> P1Report {
    let offending = (0..v.r()).find(|&j| v.column(j).into_iter().fold(0i64, |g, x| g.gcd(&x)) != 1);
    P1Report { holds: offending.is_none(), offending_column: offending }
}

pub fn check_p2(v: &ToricMatrix) -> P2Report {
    let mut lp = LinearProgram::new(v.m());
    lp.set_all_free();
    let row = |j: usize| (0..v.m()).map(|i| ri(v.entry(i, j))).collect::<Vec<_>>();
    let total: Vec<BigRational> = (0..v.m()).map(|i| (0..v.r()).map(|j| ri(v.entry(i, j))).sum()).collect();
    for j in 0..v.r() {
        lp.constrain(row(j), Relation::Ge, BigRational::zero());
    }
    lp.constrain(total.clone(), Relation::Le, ri(1));
    lp.maximize(total);
    match lp.solve().optimal() {
        Some((value, y)) if value.is_positive() => {
            let zero = vec![BigRational::zero(); v.r()];
            P2Report { holds: false, certificate: Some(v.shift(&zero, y)) }
        }
        _ => P2Report { holds: true, certificate: None },
    }
}

fn check_level(v: &ToricMatrix, a: &[BigRational]) -> Result<(), ToricError> {
    if a.len() == v.r() {
        Ok(())
    } else {
        Err(ToricError::Dimension(format!("level has length {}, expected {}", a.len(), v.r())))
    }
}

fn check_support(v: &ToricMatrix, support: &[usize]) -> Result<(), ToricError> {
    match support.iter().find(|&&j| j >= v.r()) {
        Some(j) => Err(ToricError::Dimension(format!("support index {} exceeds r = {}", j + 1, v.r()))),
        None => Ok(()),
    }
}

/// LP over `y ∈ ℚ^m` for `b = a + vᵀy` with `b_j = 0` off `support` and `b_j ≥ 0` on it.
/// With `slack` the bound becomes `b_j ≥ s`, and `s ∈ [0, 1]` is maximised.
fn support_lp(v: &ToricMatrix, a: &[BigRational], support: &[usize], slack: bool) -> Option<BigRational> {
    let m = v.m();
    let n = m + usize::from(slack);
    let mut lp = LinearProgram::new(n);
    for i in 0..m {
        lp.set_free(i);
    }
    for (j, aj) in a.iter().enumerate() {
        let mut row: Vec<BigRational> = (0..m).map(|i| ri(v.entry(i, j))).collect();
        let on = support.contains(&j);
        if slack {
            row.push(if on { ri(-1) } else { BigRational::zero() });
        }
        lp.constrain(row, if on { Relation::Ge } else { Relation::Eq }, -aj.clone());
    }
    if slack {
        let mut cap = vec![BigRational::zero(); n];
        cap[m] = ri(1);
        lp.constrain(cap.clone(), Relation::Le, ri(1));
        lp.maximize(cap);
    }
    lp.solve().optimal().map(|(value, _)| value.clone())
}

/// Whether the class of `a` has a nonnegative representative.
pub fn quotient_nonempty(v: &ToricMatrix, a: &[BigRational]) -> Result<bool, ToricError> {
    check_level(v, a)?;
    let all: Vec<usize> = (0..v.r()).collect();
    Ok(support_lp(v, a, &all, false).is_some())
}

/// Membership of the class of `a` in the closed cone `K(Σ)` and in `K₀(Σ)`.
///
/// The functional conditions are taken over maximal cones, where `f_σ` is defined on all
/// of `ℝ^m`. They depend only on the class of `a`; the nonnegative representative is an LP.
pub fn k_membership(fan: &Fan, v: &ToricMatrix, a: &[BigRational]) -> Result<KMembership, ToricError> {
    check_level(v, a)?;
    let cones = fan.max_cones();
    if let Some(c) = cones.iter().find(|c| c.len() != v.m() || c.iter().any(|&j| j >= v.r()) || !is_independent(v, c)) {
        return Err(ToricError::Invalid(format!(
            "maximal cone {:?} is not a full-dimensional simplicial cone",
            c.iter().map(|j| j + 1).collect::<Vec<_>>()
        )));
    }
    let mut in_k = quotient_nonempty(v, a)?;
    let mut in_k0 = in_k;
    for c in cones {
        for (j, s) in slack_values(c, a, v)?.into_iter().enumerate() {
            if s.is_negative() {
                in_k = false;
            }
            if !c.contains(&j) && !s.is_positive() {
                in_k0 = false;
            }
        }
    }
    Ok(KMembership { in_k, in_k0: in_k0 && in_k })
}

/// Whether a point with nonzero coordinates exactly on `support` lies in `U(Σ)`: some cone
/// has every index outside it in `support`. Enlarging a cone only shrinks its complement,
/// so maximal cones suffice.
pub fn u_membership(fan: &Fan, r: usize, support: &[usize]) -> bool {
    fan.max_cones().iter().any(|c| (0..r).all(|j| c.contains(&j) || support.contains(&j)))
}

/// Semistability and stability of a point with support `support` at level `a`.
///
/// Semistable: the class of `a` has a nonnegative representative vanishing off the
/// support. Stable: additionally the support classes span the cokernel and some
/// representative is strictly positive on the support.
pub fn semistable_lp(v: &ToricMatrix, a: &[BigRational], support: &[usize]) -> Result<Semistability, ToricError> {
    check_level(v, a)?;
    check_support(v, support)?;
    let semistable = support_lp(v, a, support, false).is_some();
    let k = v.r() - v.m();
    let spans = k == 0 || {
        let b = v.coker_basis();
        let rows: Vec<i64> = b.iter().flat_map(|bk| support.iter().map(move |&j| bk[j])).collect();
        !support.is_empty() && ExactMatrix::from_ints(k, support.len(), &rows).rank() == k
    };
    let stable = semistable && spans && support_lp(v, a, support, true).is_some_and(|s| s.is_positive());
    Ok(Semistability { semistable, stable })
}

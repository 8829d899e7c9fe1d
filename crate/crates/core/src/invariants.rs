//! Integer exterior algebra on `H¹` of a genus-`g` surface and the abelian gauge-theoretic
//! Gromov–Witten numbers built from it.
//!
//! Generators are ordered `a₁ < b₁ < a₂ < b₂ < …` and the orientation pairing reads off the
//! coefficient of `a₁∧b₁∧…∧a_g∧b_g`. The theta class is `Θ = Σ a_j∧b_j`.
//!
//! Reference values that are recorded but not derived here: for `r₀ = 2` the number of
//! maximal subbundles is bounded by `2^g` (Lange), and in rank two at genus two with odd
//! degree and `r₀ > 2` the count is `r₀³(r₀² + 2)/48` (Lange–Newstead).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// Largest genus representable by the bitmask encoding.
pub const MAX_GENUS: u32 = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantsError {
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(u32, u32),
    #[error("genus {0} exceeds the supported maximum {MAX_GENUS}")]
    GenusTooLarge(u32),
    #[error("invalid generator {0:?}")]
    Generator(String),
    #[error("index {index} outside {lo}..={hi} for {kind}")]
    IndexOutOfBand { kind: ClassKind, index: u32, lo: u32, hi: u32 },
    #[error("invalid class: {0}")]
    Invalid(String),
}

/// An element of `Λ*(ℤ^{2g})` with integer coefficients keyed by generator bitmask.
/// Bit `2(j−1)` is `a_j`, bit `2(j−1)+1` is `b_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorClass {
    g: u32,
    terms: BTreeMap<u64, BigInt>,
}

fn check_genus(g: u32) -> Result<(), InvariantsError> {
    if g > MAX_GENUS {
        Err(InvariantsError::GenusTooLarge(g))
    } else {
        Ok(())
    }
}

/// Sign of `e_S ∧ e_T` relative to `e_{S∪T}`: parity of pairs `s ∈ S, t ∈ T` with `s > t`.
fn wedge_sign(s: u64, t: u64) -> bool {
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        inversions += (s >> bit >> 1).count_ones();
        rest &= rest - 1;
    }
    inversions % 2 == 1
}

impl ExteriorClass {
    pub fn zero(g: u32) -> Result<Self, InvariantsError> {
        check_genus(g)?;
        Ok(ExteriorClass { g, terms: BTreeMap::new() })
    }

    pub fn one(g: u32) -> Result<Self, InvariantsError> {
        Self::monomial(g, 0, BigInt::one())
    }

    /// `coeff · e_mask`.
    pub fn monomial(g: u32, mask: u64, coeff: BigInt) -> Result<Self, InvariantsError> {
        let mut c = Self::zero(g)?;
        if mask >> (2 * g) != 0 {
            return Err(InvariantsError::Invalid(format!("monomial uses generators beyond genus {g}")));
        }
        if !coeff.is_zero() {
            c.terms.insert(mask, coeff);
        }
        Ok(c)
    }

    /// `a_j` for `1 ≤ j ≤ g`.
    pub fn a(g: u32, j: u32) -> Result<Self, InvariantsError> {
        Self::generator(g, &format!("a{j}"))
    }

    /// `b_j` for `1 ≤ j ≤ g`.
    pub fn b(g: u32, j: u32) -> Result<Self, InvariantsError> {
        Self::generator(g, &format!("b{j}"))
    }

    /// A generator named `a<j>` or `b<j>`.
    pub fn generator(g: u32, name: &str) -> Result<Self, InvariantsError> {
        Self::monomial(g, 1 << generator_bit(g, name)?, BigInt::one())
    }

    /// The orientation class `a₁∧b₁∧…∧a_g∧b_g`.
    pub fn top(g: u32) -> Result<Self, InvariantsError> {
        check_genus(g)?;
        Self::monomial(g, top_mask(g), BigInt::one())
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn terms(&self) -> &BTreeMap<u64, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: u64) -> BigInt {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    /// The pairing with the orientation class.
    pub fn top_coefficient(&self) -> BigInt {
        self.coefficient(top_mask(self.g))
    }

    /// The common degree of all terms, if there is one. The zero class has none.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.count_ones());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    fn same_genus(&self, o: &Self) -> Result<(), InvariantsError> {
        if self.g == o.g {
            Ok(())
        } else {
            Err(InvariantsError::GenusMismatch(self.g, o.g))
        }
    }

    fn insert(&mut self, mask: u64, c: BigInt) {
        let entry = self.terms.entry(mask).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, InvariantsError> {
        self.same_genus(o)?;
        let mut out = self.clone();
        for (&m, c) in &o.terms {
            out.insert(m, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return ExteriorClass { g: self.g, terms: BTreeMap::new() };
        }
        ExteriorClass { g: self.g, terms: self.terms.iter().map(|(&m, c)| (m, c * k)).collect() }
    }

    pub fn wedge(&self, o: &Self) -> Result<Self, InvariantsError> {
        self.same_genus(o)?;
        let mut out = ExteriorClass { g: self.g, terms: BTreeMap::new() };
        for (&s, x) in &self.terms {
            for (&t, y) in &o.terms {
                if s & t != 0 {
                    continue;
                }
                let c = x * y;
                out.insert(s | t, if wedge_sign(s, t) { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Terms as `(generator names, coefficient)` in basis order.
    pub fn named_terms(&self) -> Vec<(Vec<String>, BigInt)> {
        self.terms.iter().map(|(&m, c)| (mask_names(m), c.clone())).collect()
    }
}

fn top_mask(g: u32) -> u64 {
    if g == 0 {
        0
    } else {
        u64::MAX >> (64 - 2 * g)
    }
}

fn generator_bit(g: u32, name: &str) -> Result<u32, InvariantsError> {
    let bad = || InvariantsError::Generator(name.to_string());
    let (kind, idx) = name.split_at_checked(1).ok_or_else(bad)?;
    let j: u32 = idx.parse().map_err(|_| bad())?;
    if j == 0 || j > g {
        return Err(bad());
    }
    match kind {
        "a" => Ok(2 * (j - 1)),
        "b" => Ok(2 * (j - 1) + 1),
        _ => Err(bad()),
    }
}

fn mask_names(mask: u64) -> Vec<String> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| format!("{}{}", if b % 2 == 0 { 'a' } else { 'b' }, b / 2 + 1))
        .collect()
}

impl fmt::Display for ExteriorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .named_terms()
            .into_iter()
            .map(|(names, c)| if names.is_empty() { c.to_string() } else { format!("{c}*{}", names.join("^")) })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// File form: `{"g": 2, "terms": [{"gens": ["a1", "b1"], "coeff": 3}]}`. Coefficients may be
/// integers or decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassFile {
    pub g: u32,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub gens: Vec<String>,
    pub coeff: Value,
}

fn coeff_from_value(v: &Value) -> Result<BigInt, InvariantsError> {
    let bad = || InvariantsError::Invalid(format!("coefficient {v} is not an integer"));
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(bad),
        Value::String(s) => s.trim().parse().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn coeff_to_value(c: &BigInt) -> Value {
    i64::try_from(c).map_or_else(|_| Value::String(c.to_string()), Value::from)
}

impl ClassFile {
    pub fn class(&self) -> Result<ExteriorClass, InvariantsError> {
        let mut out = ExteriorClass::zero(self.g)?;
        for t in &self.terms {
            let mut term = ExteriorClass::one(self.g)?.scale(&coeff_from_value(&t.coeff)?);
            for name in &t.gens {
                term = term.wedge(&ExteriorClass::generator(self.g, name)?)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

impl From<&ExteriorClass> for ClassFile {
    fn from(c: &ExteriorClass) -> Self {
        ClassFile {
            g: c.g,
            terms: c.named_terms().into_iter().map(|(gens, c)| TermFile { gens, coeff: coeff_to_value(&c) }).collect(),
        }
    }
}

/// `Θ^i/i! = Σ_{|S| = i} ∧_{j∈S} a_j∧b_j`; zero for `i > g`.
pub fn theta_div_factorial(g: u32, i: u32) -> Result<ExteriorClass, InvariantsError> {
    let mut out = ExteriorClass::zero(g)?;
    if i > g {
        return Ok(out);
    }
    // pairs a_j∧b_j occupy adjacent bits, so the monomials are sign-free
    for subset in 0u64..(1u64 << g) {
        if subset.count_ones() == i {
            let mask = (0..g).filter(|j| subset >> j & 1 == 1).fold(0u64, |m, j| m | 0b11 << (2 * j));
            out.terms.insert(mask, BigInt::one());
        }
    }
    Ok(out)
}

/// Expected dimension of the moduli space for ranks `(r, r₀)` and degrees `(d, d₀)`:
/// `r d₀ − r₀ d + r(r − r₀)(g − 1)`. At `r = 1` this coincides with the abelian formula
/// `d₀ − r₀ d + (r₀ − 1)(1 − g)`, which is asserted.
pub fn expected_dimension(r: i64, r0: i64, d: i64, d0: i64, g: i64) -> i64 {
    let general = r * d0 - r0 * d + r * (r - r0) * (g - 1);
    if r == 1 {
        assert_eq!(general, abelian_expected_dimension(r0, d, d0, g));
    }
    general
}

/// `d₀ − r₀ d + (r₀ − 1)(1 − g)`.
pub fn abelian_expected_dimension(r0: i64, d: i64, d0: i64, g: i64) -> i64 {
    d0 - r0 * d + (r0 - 1) * (1 - g)
}

/// Position of the parameter relative to the threshold `t* = −2πd/Vol`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdSide {
    Above,
    Below,
}

impl ThresholdSide {
    /// `None` exactly on the wall `t = t*`.
    pub fn of(t: f64, d: i64, vol: f64) -> Option<Self> {
        let star = -2.0 * std::f64::consts::PI * d as f64 / vol;
        if t > star {
            Some(ThresholdSide::Above)
        } else if t < star {
            Some(ThresholdSide::Below)
        } else {
            None
        }
    }
}

/// Rank-one data `(E, E₀)` over a genus-`g` surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianProblem {
    pub g: u32,
    pub r0: u32,
    pub d: i64,
    pub d0: i64,
    pub side: ThresholdSide,
}

impl AbelianProblem {
    pub fn expected_dimension(&self) -> i64 {
        expected_dimension(1, i64::from(self.r0), self.d, self.d0, i64::from(self.g))
    }
}

/// Value of the invariant with its per-`i` contributions `r₀^i ⟨Θ^i/i! ∧ l, top⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GgwValue {
    pub value: BigInt,
    pub v: i64,
    pub terms: Vec<(u32, BigInt)>,
}

/// The abelian invariant at the class `l`: zero below the threshold, otherwise the top
/// coefficient of `Σ_{i = max(0, g−v)}^{g} r₀^i Θ^i/i! ∧ l`. For homogeneous `l` only the
/// term with `2i + deg l = 2g` can contribute, and only that one is evaluated.
pub fn ggw_abelian(p: &AbelianProblem, l: &ExteriorClass) -> Result<GgwValue, InvariantsError> {
    if p.r0 == 0 {
        return Err(InvariantsError::Invalid("r0 must be at least 1".into()));
    }
    if l.genus() != p.g {
        return Err(InvariantsError::GenusMismatch(p.g, l.genus()));
    }
    let v = p.expected_dimension();
    if p.side == ThresholdSide::Below {
        return Ok(GgwValue { value: BigInt::zero(), v, terms: Vec::new() });
    }
    let lo = (i64::from(p.g) - v).max(0);
    let range: Vec<u32> = match l.homogeneous_degree() {
        None if l.is_zero() => Vec::new(),
        None => (0..=p.g).filter(|&i| i64::from(i) >= lo).collect(),
        Some(k) if k % 2 == 0 && k / 2 <= p.g => {
            let i = p.g - k / 2;
            if i64::from(i) >= lo {
                vec![i]
            } else {
                Vec::new()
            }
        }
        Some(_) => Vec::new(),
    };
    let r0 = BigInt::from(p.r0);
    let mut terms = Vec::new();
    for i in range {
        let c = theta_div_factorial(p.g, i)?.wedge(l)?.top_coefficient() * Pow::pow(&r0, i);
        terms.push((i, c));
    }
    let value = terms.iter().map(|(_, c)| c).sum();
    Ok(GgwValue { value, v, terms })
}

/// `r₀^g`, the length of the zero-dimensional Quot scheme in rank one.
pub fn quot_count(g: u32, r0: u32) -> BigInt {
    Pow::pow(&BigInt::from(r0), g)
}

/// Generator families of the tautological algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    U,
    V,
    H1,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassKind::U => "u",
            ClassKind::V => "v",
            ClassKind::H1 => "h1",
        })
    }
}

/// Degrees `deg u_i = 2i` (`1 ≤ i ≤ r`), `deg v_j = 2j − 2` (`2 ≤ j ≤ r`) and
/// `deg H₁_l = 2l − 1` (`1 ≤ l ≤ r`).
pub fn algebra_degree(r: u32, kind: ClassKind, index: u32) -> Result<u32, InvariantsError> {
    let lo = if kind == ClassKind::V { 2 } else { 1 };
    if index < lo || index > r {
        return Err(InvariantsError::IndexOutOfBand { kind, index, lo, hi: r });
    }
    Ok(match kind {
        ClassKind::U => 2 * index,
        ClassKind::V => 2 * index - 2,
        ClassKind::H1 => 2 * index - 1,
    })
}

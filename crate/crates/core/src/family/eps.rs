use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{format_rational, parse_rational, LinalgError};

/// `value + eps·ε` for an infinitesimal `ε > 0`; the derived order is lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct EpsRational {
    pub value: BigRational,
    pub eps: BigRational,
}

impl EpsRational {
    pub fn new(value: BigRational, eps: BigRational) -> Self {
        EpsRational { value, eps }
    }

    pub fn exact(value: BigRational) -> Self {
        EpsRational { value, eps: BigRational::zero() }
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_positive() || (self.value.is_zero() && self.eps.is_positive())
    }

    pub fn times(&self, n: usize) -> EpsRational {
        let n = BigRational::from_integer(n.into());
        EpsRational { value: &self.value * &n, eps: &self.eps * &n }
    }
}

impl From<BigRational> for EpsRational {
    fn from(q: BigRational) -> Self {
        EpsRational::exact(q)
    }
}

impl FromStr for EpsRational {
    type Err = LinalgError;

    /// Accepts `"p/q"`, `"p/q+eps"`, `"p/q-eps"` and `"p/q+c*eps"` (also `"eps"`).
    fn from_str(s: &str) -> Result<Self, LinalgError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(stripped) = s.strip_suffix("eps") else {
            return Ok(EpsRational::exact(parse_rational(&s)?));
        };
        // split the ε term at the last sign that is not a leading one
        let cut = stripped.char_indices().filter(|&(i, c)| i > 0 && (c == '+' || c == '-')).map(|(i, _)| i).next_back();
        let (value, coeff) = match cut {
            Some(i) => (&stripped[..i], &stripped[i..]),
            None => ("", stripped),
        };
        let value = if value.is_empty() { BigRational::zero() } else { parse_rational(value)? };
        let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
        let eps = match coeff {
            "" | "+" => BigRational::from_integer(1.into()),
            "-" => BigRational::from_integer((-1).into()),
            c => parse_rational(c)?,
        };
        Ok(EpsRational { value, eps })
    }
}

impl TryFrom<String> for EpsRational {
    type Error = LinalgError;
    fn try_from(s: String) -> Result<Self, LinalgError> {
        s.parse()
    }
}

impl From<EpsRational> for String {
    fn from(e: EpsRational) -> String {
        e.to_string()
    }
}

impl fmt::Display for EpsRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eps.is_zero() {
            return f.write_str(&format_rational(&self.value));
        }
        let sign = if self.eps.is_negative() { '-' } else { '+' };
        write!(f, "{}{sign}{}*eps", format_rational(&self.value), format_rational(&self.eps.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_int};

    #[test]
    fn parses_symbolic_forms() {
        let e: EpsRational = "1+eps".parse().unwrap();
        assert_eq!(e, EpsRational::new(rat_int(1), rat_int(1)));
        let e: EpsRational = "3/2-1/4*eps".parse().unwrap();
        assert_eq!(e, EpsRational::new(rat(3, 2), rat(-1, 4)));
        let e: EpsRational = "-2".parse().unwrap();
        assert_eq!(e, EpsRational::exact(rat_int(-2)));
        let e: EpsRational = "eps".parse().unwrap();
        assert!(e.is_positive());
        assert_eq!("1+1*eps".parse::<EpsRational>().unwrap().to_string(), "1+1*eps");
        assert!("x+eps".parse::<EpsRational>().is_err());
    }

    #[test]
    fn order_is_lexicographic() {
        let one = EpsRational::exact(rat_int(1));
        let one_eps: EpsRational = "1+eps".parse().unwrap();
        assert!(one < one_eps);
        assert!(one_eps < EpsRational::exact(rat(1001, 1000)));
        assert!(one_eps.times(2) > one.times(2));
    }
}

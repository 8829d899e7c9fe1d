//! JSON forms: a rational is `"p/q"` (or `"p"`), a complex number is
//! `{"re": "p/q", "im": "p/q"}`, a matrix is row-major nested arrays. Plain JSON numbers
//! are accepted on input and converted exactly.

use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::matrix::ExactMatrix;
use super::scalar::{format_rational, parse_rational, GaussRat};
use super::{complex_json, CMatrix, LinalgError, Matrix};

pub(crate) fn rational_from_value(v: &Value) -> Result<BigRational, LinalgError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else {
                // keep the decimal text rather than the binary double
                parse_rational(&n.to_string())
            }
        }
        other => Err(LinalgError::Parse(format!("expected a rational, got {other}"))),
    }
}

pub(crate) fn gauss_from_value(v: &Value) -> Result<GaussRat, LinalgError> {
    match v {
        Value::Object(map) => {
            let part = |k: &str| map.get(k).map_or(Ok(BigRational::zero()), rational_from_value);
            Ok(GaussRat::new(part("re")?, part("im")?))
        }
        other => Ok(GaussRat::real(rational_from_value(other)?)),
    }
}

impl Serialize for GaussRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("re", &format_rational(&self.re))?;
        m.serialize_entry("im", &format_rational(&self.im))?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for GaussRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        gauss_from_value(&v).map_err(D::Error::custom)
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.row_vecs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<GaussRat>> = Vec::deserialize(d)?;
        Matrix::from_rows(rows).map_err(D::Error::custom)
    }
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CMatrix::Exact(m) => m.serialize(s),
            CMatrix::Float(m) => {
                let rows: Vec<Vec<Value>> =
                    m.row_vecs().iter().map(|r| r.iter().map(complex_json).collect()).collect();
                rows.serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        ExactMatrix::deserialize(d).map(CMatrix::Exact)
    }
}

/// Serde adapter for `BigRational` fields stored as `"p/q"` strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let v = Value::deserialize(d)?;
        rational_from_value(&v).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<BigRational>`.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(q: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        q.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let v: Vec<Value> = Vec::deserialize(d)?;
        v.iter().map(|x| rational_from_value(x).map_err(D::Error::custom)).collect()
    }
}

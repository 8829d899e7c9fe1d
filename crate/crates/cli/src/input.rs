use std::fs;
use std::path::Path;

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use sfpas_core::linalg::parse_rational;

use crate::error::CliError;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

/// `"1,0,-1/2"` as rationals; the empty string is the empty list.
pub fn rational_list(s: &str) -> Result<Vec<BigRational>, CliError> {
    split(s).map(|x| parse_rational(x).map_err(CliError::from)).collect()
}

/// `"1,3"` of 1-based indices as 0-based indices below `r`.
pub fn index_list(s: &str, r: usize) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for x in split(s) {
        let j: usize = x.parse().map_err(|_| CliError::invalid(format!("bad index {x:?}")))?;
        if j == 0 || j > r {
            return Err(CliError::invalid(format!("index {j} outside 1..={r}")));
        }
        out.push(j - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn split(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

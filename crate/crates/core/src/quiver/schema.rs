//! The JSON problem file:
//!
//! ```json
//! {"quiver": {"vertices": ["V", "C"], "arrows": [{"id": "f", "src": "V", "dst": "C"}]},
//!  "dims": {"V": 1, "C": 1},
//!  "twists": {"f": 1},
//!  "symmetry": {"full_vertex_product": {"vertices": ["V"]}},
//!  "point": {"maps": {"f": [["1"]]}},
//!  "level": {"vertex": {"V": "1/2"}}}
//! ```
//!
//! `twists` defaults to 1 per arrow; `point` and `level` are optional. A torus symmetry is
//! `{"torus_kernel": {"v": [[1, -1]]}}` with level `{"torus": ["1", "0"]}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Level, Quiver, QuiverDims, QuiverError, QuiverPoint, QuiverProblem, SymmetrySpec};
use crate::linalg::{format_rational, rational_from_value, CMatrix, ExactMatrix};
use crate::toric::ToricMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverFile {
    pub quiver: QuiverShape,
    pub dims: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub twists: BTreeMap<String, usize>,
    pub symmetry: SymmetryFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<PointFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<LevelFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverShape {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowFile {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SymmetryFile {
    FullVertexProduct { vertices: Vec<String> },
    TorusKernel { v: Vec<Vec<i64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub maps: BTreeMap<String, ExactMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LevelFile {
    Vertex(BTreeMap<String, Value>),
    Torus(Vec<Value>),
}

fn invalid(msg: impl Into<String>) -> QuiverError {
    QuiverError::Invalid(msg.into())
}

impl QuiverFile {
    pub fn problem(&self) -> Result<QuiverProblem, QuiverError> {
        let arrows = self.quiver.arrows.iter().map(|a| (a.id.clone(), a.src.clone(), a.dst.clone())).collect();
        let quiver = Quiver::new(self.quiver.vertices.clone(), arrows)?;
        for k in self.dims.keys() {
            if quiver.vertex_index(k).is_none() {
                return Err(invalid(format!("dims names unknown vertex {k:?}")));
            }
        }
        for k in self.twists.keys() {
            if quiver.arrow_index(k).is_none() {
                return Err(invalid(format!("twists names unknown arrow {k:?}")));
            }
        }
        let vertex_dim = quiver
            .vertices()
            .iter()
            .map(|v| self.dims.get(v).copied().ok_or_else(|| invalid(format!("missing dimension for vertex {v:?}"))))
            .collect::<Result<_, _>>()?;
        let twist_dim = quiver.arrows().iter().map(|a| self.twists.get(&a.id).copied().unwrap_or(1)).collect();
        let symmetry = match &self.symmetry {
            SymmetryFile::FullVertexProduct { vertices } => SymmetrySpec::FullVertexProduct(
                vertices
                    .iter()
                    .map(|v| quiver.vertex_index(v).ok_or_else(|| invalid(format!("unknown symmetry vertex {v:?}"))))
                    .collect::<Result<_, _>>()?,
            ),
            SymmetryFile::TorusKernel { v } => {
                SymmetrySpec::TorusKernel(ToricMatrix::new(v.clone()).map_err(|e| invalid(e.to_string()))?)
            }
        };
        QuiverProblem::new(quiver, QuiverDims { vertex_dim, twist_dim }, symmetry)
    }

    pub fn point(&self, prob: &QuiverProblem) -> Result<Option<QuiverPoint>, QuiverError> {
        let Some(pf) = &self.point else {
            return Ok(None);
        };
        for k in pf.maps.keys() {
            if prob.quiver.arrow_index(k).is_none() {
                return Err(invalid(format!("point names unknown arrow {k:?}")));
            }
        }
        let maps = prob
            .quiver
            .arrows()
            .iter()
            .map(|a| {
                pf.maps
                    .get(&a.id)
                    .cloned()
                    .map(CMatrix::Exact)
                    .ok_or_else(|| invalid(format!("point is missing the map on arrow {:?}", a.id)))
            })
            .collect::<Result<_, _>>()?;
        let p = QuiverPoint { maps };
        prob.check_point(&p)?;
        Ok(Some(p))
    }

    pub fn level(&self, prob: &QuiverProblem) -> Result<Option<Level>, QuiverError> {
        let parse = |v: &Value| rational_from_value(v).map_err(QuiverError::from);
        let lvl = match (&self.level, &prob.symmetry) {
            (None, _) => return Ok(None),
            (Some(LevelFile::Vertex(map)), SymmetrySpec::FullVertexProduct(s)) => {
                let names: Vec<&String> = s.iter().map(|&v| &prob.quiver.vertices()[v]).collect();
                if let Some(k) = map.keys().find(|k| !names.contains(k)) {
                    return Err(QuiverError::LevelMismatch(format!("level names vertex {k:?} outside the symmetry set")));
                }
                let t = names
                    .iter()
                    .map(|n| {
                        map.get(*n)
                            .ok_or_else(|| QuiverError::LevelMismatch(format!("missing level for vertex {n:?}")))
                            .and_then(parse)
                    })
                    .collect::<Result<_, _>>()?;
                Level::Vertex(t)
            }
            (Some(LevelFile::Torus(a)), SymmetrySpec::TorusKernel(_)) => {
                Level::Torus(a.iter().map(parse).collect::<Result<_, _>>()?)
            }
            _ => return Err(QuiverError::LevelMismatch("level variant does not match the symmetry".into())),
        };
        prob.check_level(&lvl)?;
        Ok(Some(lvl))
    }
}

/// `{arrow id: matrix}` for output.
pub fn point_to_json(prob: &QuiverProblem, p: &QuiverPoint) -> Value {
    let map: serde_json::Map<String, Value> = prob
        .quiver
        .arrows()
        .iter()
        .zip(&p.maps)
        .map(|(a, m)| (a.id.clone(), serde_json::to_value(m).expect("matrix serializes")))
        .collect();
    Value::Object(map)
}

/// A level in file form.
pub fn level_to_json(prob: &QuiverProblem, lvl: &Level) -> Value {
    match (lvl, &prob.symmetry) {
        (Level::Vertex(t), SymmetrySpec::FullVertexProduct(s)) => {
            let map: serde_json::Map<String, Value> = s
                .iter()
                .zip(t)
                .map(|(&v, x)| (prob.quiver.vertices()[v].clone(), Value::String(format_rational(x))))
                .collect();
            serde_json::json!({ "vertex": map })
        }
        (Level::Vertex(t) | Level::Torus(t), _) => {
            serde_json::json!({ "torus": t.iter().map(format_rational).collect::<Vec<_>>() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    const GRASSMANN: &str = r#"{
        "quiver": {"vertices": ["V", "C"], "arrows": [{"id": "f", "src": "V", "dst": "C"}]},
        "dims": {"V": 1, "C": 1},
        "symmetry": {"full_vertex_product": {"vertices": ["V"]}},
        "point": {"maps": {"f": [["1"]]}},
        "level": {"vertex": {"V": "1/2"}}
    }"#;

    #[test]
    fn grassmann_file_parses() {
        let file: QuiverFile = serde_json::from_str(GRASSMANN).unwrap();
        let prob = file.problem().unwrap();
        assert_eq!(prob, QuiverProblem::grassmann(1, 1).unwrap());
        assert_eq!(file.level(&prob).unwrap(), Some(Level::Vertex(vec![rat(1, 2)])));
        assert!(file.point(&prob).unwrap().is_some());
    }

    #[test]
    fn bad_files_are_rejected() {
        let mut v: Value = serde_json::from_str(GRASSMANN).unwrap();
        v["level"] = serde_json::json!({"torus": ["1"]});
        let file: QuiverFile = serde_json::from_value(v.clone()).unwrap();
        assert!(file.level(&file.problem().unwrap()).is_err());

        v["point"] = serde_json::json!({"maps": {"f": [["1", "2"]]}});
        let file: QuiverFile = serde_json::from_value(v.clone()).unwrap();
        assert!(matches!(file.point(&file.problem().unwrap()), Err(QuiverError::Shape(_))));

        v["extra"] = Value::Null;
        assert!(serde_json::from_value::<QuiverFile>(v).is_err());
    }
}

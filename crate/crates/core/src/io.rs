//! JSON interchange for every domain object the command line touches.
//!
//! Each loader parses a small explicit schema, funnels the data through the
//! usual validating constructor, and reports any silent repair (such as
//! symmetrizing an entry list) as a notice string the caller can surface.
//! Serialization always emits the canonical form: sorted index triples,
//! normalized matchings, pretty-printed JSON with a trailing newline, so that
//! load-then-serialize is byte-identical on canonical input.

use std::path::Path;

use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::graph::TrivalentGraph;
use crate::lie::LieData;
use crate::link::PolyCurve;
use crate::tensor::{CubicModel, CubicTensor};
use crate::wick::QuadraticForm;

/// A loaded object plus any notices produced while repairing the input.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub value: T,
    pub notices: Vec<String>,
}

impl<T> Loaded<T> {
    fn clean(value: T) -> Self {
        Loaded {
            value,
            notices: Vec::new(),
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: usize,
    matching: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CubicFile {
    n: usize,
    entries: Vec<(usize, usize, usize, f64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    quadratic: Vec<Vec<f64>>,
    cubic: CubicFile,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LieFile {
    dim: usize,
    b: Vec<Vec<f64>>,
    c: Vec<(usize, usize, usize, f64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    points: Vec<[f64; 3]>,
}

fn matrix_from_rows(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be a nonempty square matrix of rows"
        )));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn load_graph(path: &Path) -> Result<Loaded<TrivalentGraph>> {
    let file: GraphFile = read_json(path)?;
    let graph = TrivalentGraph::new(file.vertices, file.matching)?;
    Ok(Loaded::clean(graph))
}

pub fn serialize_graph(graph: &TrivalentGraph) -> String {
    to_canonical_json(&GraphFile {
        vertices: graph.num_vertices(),
        matching: graph.matching().to_vec(),
    })
}

fn cubic_from_file(file: &CubicFile) -> Result<(CubicTensor, Vec<String>)> {
    let cubic = CubicTensor::from_entries(file.n, &file.entries)?;
    let mut notices = Vec::new();
    if cubic.was_symmetrized() {
        notices.push(
            "cubic entry list was not symmetric; the symmetric part was kept".to_string(),
        );
    }
    Ok((cubic, notices))
}

/// Nonzero entries with sorted indices; the canonical entry list.
fn cubic_to_entries(cubic: &CubicTensor) -> Vec<(usize, usize, usize, f64)> {
    let n = cubic.dim();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let v = cubic.entry(i, j, k);
                if v != 0.0 {
                    entries.push((i, j, k, v));
                }
            }
        }
    }
    entries
}

pub fn load_model(path: &Path, cfg: &Config) -> Result<Loaded<CubicModel>> {
    let file: ModelFile = read_json(path)?;
    let q = matrix_from_rows(&file.quadratic, "quadratic form")?;
    let quadratic = QuadraticForm::with_tolerances(q, cfg.symmetry_tol, cfg.det_floor)?;
    let (cubic, notices) = cubic_from_file(&file.cubic)?;
    let model = CubicModel::new(quadratic, cubic)?;
    Ok(Loaded {
        value: model,
        notices,
    })
}

pub fn serialize_model(model: &CubicModel) -> String {
    to_canonical_json(&ModelFile {
        quadratic: matrix_to_rows(model.quadratic.matrix()),
        cubic: CubicFile {
            n: model.cubic.dim(),
            entries: cubic_to_entries(&model.cubic),
        },
    })
}

pub fn load_lie(path: &Path) -> Result<Loaded<LieData>> {
    let file: LieFile = read_json(path)?;
    let b = matrix_from_rows(&file.b, "invariant form")?;
    if b.nrows() != file.dim {
        return Err(Error::DimensionMismatch(format!(
            "declared dim {} but the form is {}x{}",
            file.dim,
            b.nrows(),
            b.ncols()
        )));
    }
    let data = LieData::from_entries(b, &file.c)?;
    let mut notices = Vec::new();
    if data.was_antisymmetrized() {
        notices.push(
            "structure-constant entry list was not antisymmetric; the alternating part was kept"
                .to_string(),
        );
    }
    Ok(Loaded {
        value: data,
        notices,
    })
}

/// Nonzero structure constants with strictly increasing indices; entries with
/// a repeated index are identically zero and never emitted.
fn lie_to_entries(data: &LieData) -> Vec<(usize, usize, usize, f64)> {
    let d = data.dim();
    let mut entries = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            for k in (j + 1)..d {
                let v = data.structure_constant(i, j, k);
                if v != 0.0 {
                    entries.push((i, j, k, v));
                }
            }
        }
    }
    entries
}

pub fn serialize_lie(data: &LieData) -> String {
    to_canonical_json(&LieFile {
        dim: data.dim(),
        b: matrix_to_rows(data.form()),
        c: lie_to_entries(data),
    })
}

pub fn load_curve(path: &Path) -> Result<Loaded<PolyCurve>> {
    let file: CurveFile = read_json(path)?;
    let curve = PolyCurve::new(file.points)?;
    Ok(Loaded::clean(curve))
}

pub fn serialize_curve(curve: &PolyCurve) -> String {
    to_canonical_json(&CurveFile {
        points: curve.points().iter().map(|p| [p.x, p.y, p.z]).collect(),
    })
}

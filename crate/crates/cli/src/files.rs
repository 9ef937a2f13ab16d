//! JSON instance and spline-set files.
//!
//! Components are listed `v_1..v_n` in file order; the bottom-to-top matrix
//! convention is applied only when determinants are taken.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use egs_algebra::graph::LabeledGraph;
use egs_algebra::rings::{BaseRing, Ring, RingDescriptor, RingElement};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BaseSpec {
    Integers,
    Rationals,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RingSpec {
    Integers,
    Polynomial {
        variables: Vec<String>,
        base: BaseSpec,
    },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub name: String,
    pub label: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub u: String,
    pub v: String,
    pub label: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub ring: RingSpec,
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

/// Extra keys are ignored so that `flowup --json` output reads back.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SplineSetFile {
    pub splines: Vec<Vec<String>>,
}

/// Either `{"spline": [...]}` or a spline set holding exactly one spline.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum TargetFile {
    Single { spline: Vec<String> },
    Set { splines: Vec<Vec<String>> },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn from_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn ring_of(spec: &RingSpec) -> Result<Ring, CliError> {
    let descriptor = match spec {
        RingSpec::Integers => RingDescriptor::Integers,
        RingSpec::Polynomial { variables, base } => RingDescriptor::Polynomial {
            variables: variables.clone(),
            base: match base {
                BaseSpec::Integers => BaseRing::Integers,
                BaseSpec::Rationals => BaseRing::Rationals,
            },
        },
    };
    Ring::new(descriptor).map_err(|e| CliError::Invalid(e.to_string()))
}

fn parse_in(
    ring: &Ring,
    text: &str,
    context: impl FnOnce() -> String,
) -> Result<RingElement, CliError> {
    ring.parse(text).map_err(|e| CliError::Parse {
        context: context(),
        message: e.to_string(),
    })
}

impl InstanceFile {
    pub fn parse(path: &Path, text: &str) -> Result<Self, CliError> {
        from_json(path, text)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(path, &read(path)?)
    }

    pub fn to_graph(&self) -> Result<LabeledGraph, CliError> {
        let ring = ring_of(&self.ring)?;
        let mut b = LabeledGraph::builder(ring.clone());
        let mut index = HashMap::new();
        for v in &self.vertices {
            let label = parse_in(&ring, &v.label, || format!("label of vertex {}", v.name))?;
            if index
                .insert(v.name.clone(), b.vertex(v.name.clone(), label))
                .is_some()
            {
                return Err(CliError::Invalid(format!(
                    "duplicate vertex name {}",
                    v.name
                )));
            }
        }
        for (k, e) in self.edges.iter().enumerate() {
            let endpoint = |name: &str| {
                index.get(name).copied().ok_or_else(|| {
                    CliError::Invalid(format!("edge e{} references unknown vertex {name}", k + 1))
                })
            };
            let (u, v) = (endpoint(&e.u)?, endpoint(&e.v)?);
            let label = parse_in(&ring, &e.label, || format!("label of edge e{}", k + 1))?;
            b.edge(u, v, label);
        }
        Ok(b.build()?)
    }
}

fn components(g: &LabeledGraph, raw: &[String], what: &str) -> Result<Vec<RingElement>, CliError> {
    if raw.len() != g.vertex_count() {
        return Err(CliError::Invalid(format!(
            "{what} has {} components, the graph has {} vertices",
            raw.len(),
            g.vertex_count()
        )));
    }
    raw.iter()
        .enumerate()
        .map(|(v, s)| parse_in(g.ring(), s, || format!("{what}, component v{}", v + 1)))
        .collect()
}

pub fn load_instance(path: &Path) -> Result<LabeledGraph, CliError> {
    InstanceFile::load(path)?.to_graph()
}

pub fn parse_splines(
    g: &LabeledGraph,
    path: &Path,
    text: &str,
) -> Result<Vec<Vec<RingElement>>, CliError> {
    let file: SplineSetFile = from_json(path, text)?;
    file.splines
        .iter()
        .enumerate()
        .map(|(k, s)| components(g, s, &format!("spline F{}", k + 1)))
        .collect()
}

pub fn load_splines(g: &LabeledGraph, path: &Path) -> Result<Vec<Vec<RingElement>>, CliError> {
    parse_splines(g, path, &read(path)?)
}

pub fn parse_target(
    g: &LabeledGraph,
    path: &Path,
    text: &str,
) -> Result<Vec<RingElement>, CliError> {
    let raw = match from_json::<TargetFile>(path, text)? {
        TargetFile::Single { spline } => spline,
        TargetFile::Set { mut splines } => {
            if splines.len() != 1 {
                return Err(CliError::Invalid(format!(
                    "target file must hold exactly one spline, found {}",
                    splines.len()
                )));
            }
            splines.remove(0)
        }
    };
    components(g, &raw, "target")
}

pub fn load_target(g: &LabeledGraph, path: &Path) -> Result<Vec<RingElement>, CliError> {
    parse_target(g, path, &read(path)?)
}

pub fn spline_set_json(columns: &[Vec<RingElement>]) -> Vec<Vec<String>> {
    columns
        .iter()
        .map(|c| c.iter().map(ToString::to_string).collect())
        .collect()
}

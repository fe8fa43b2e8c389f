//! Bundled example gain graphs with their expected properties.
//!
//! The JSON files under `fixtures/` are compiled in. Setting `SYMRIG_FIXTURES`
//! to a directory makes [`load`] read `<dir>/<name>.json` instead when it
//! exists.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gain_graph::{EdgeId, GainGraph};
use crate::matroid::CountFamily;

pub const FIXTURE_DIR_VAR: &str = "SYMRIG_FIXTURES";

pub const NAMES: [&str; 5] = ["fig1b", "fig2a", "fig2b", "fig3", "fig4"];

const BUNDLED: [(&str, &str); 5] = [
    ("fig1b", include_str!("../fixtures/fig1b.json")),
    ("fig2a", include_str!("../fixtures/fig2a.json")),
    ("fig2b", include_str!("../fixtures/fig2b.json")),
    ("fig3", include_str!("../fixtures/fig3.json")),
    ("fig4", include_str!("../fixtures/fig4.json")),
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub graph: GainGraph,
    /// Named edge partitions.
    #[serde(default)]
    pub partitions: BTreeMap<String, Vec<Vec<EdgeId>>>,
    pub expected: Expected,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub vertex_count: usize,
    pub edge_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covering_vertices: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covering_edges: Option<usize>,
    /// The covering graph is `n`-mixed-connected for this `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed_connected: Option<usize>,
    /// The covering graph is not `n`-mixed-connected for this `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_mixed_connected: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_edge_connected: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<ExpectedPartition>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<ExpectedVerdict>,
    /// Cover sets as `(group element, vertex name)` pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cover: Vec<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedPartition {
    pub family: String,
    pub name: String,
    pub value: i64,
    pub threshold: i64,
}

impl ExpectedPartition {
    pub fn family(&self) -> Result<CountFamily> {
        match self.family.as_str() {
            "rho" => Ok(CountFamily::Rho),
            "mu" => Ok(CountFamily::Mu),
            other => Err(Error::InvalidArgument(format!("unknown count family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedVerdict {
    pub mode: String,
    pub t: i64,
    pub rigid: bool,
}

impl Fixture {
    pub fn from_json(text: &str) -> Result<Fixture> {
        let f: Fixture = serde_json::from_str(text)?;
        for (name, parts) in &f.partitions {
            for &e in parts.iter().flatten() {
                if e >= f.graph.edge_count() {
                    return Err(Error::InvalidGraph(format!("partition {name} names missing edge {e}")));
                }
            }
        }
        Ok(f)
    }

    pub fn partition(&self, name: &str) -> Result<&[Vec<EdgeId>]> {
        self.partitions
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidArgument(format!("fixture {} has no partition {name:?}", self.name)))
    }
}

fn override_path(name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(FIXTURE_DIR_VAR)?;
    let path = PathBuf::from(dir).join(format!("{name}.json"));
    path.is_file().then_some(path)
}

pub fn load(name: &str) -> Result<Fixture> {
    if let Some(path) = override_path(name) {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        return Fixture::from_json(&text);
    }
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown fixture {name:?}; known: {}", NAMES.join(", "))))?;
    Fixture::from_json(text)
}

pub fn all() -> Result<Vec<Fixture>> {
    NAMES.iter().map(|n| load(n)).collect()
}

//! Reading graphs and partitions from files, stdin or bundled fixture names.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::Value;
use symrig::fixtures::{self, Fixture};
use symrig::{CoveringGraph, EdgeId, GainGraph};

/// A gain graph plus the partitions that came with it, if it was a fixture.
pub struct Loaded {
    pub graph: GainGraph,
    pub fixture: Option<Fixture>,
}

impl Loaded {
    pub fn fixture_partitions(&self) -> Vec<Vec<Vec<EdgeId>>> {
        self.fixture
            .as_ref()
            .map(|f| f.partitions.values().cloned().collect())
            .unwrap_or_default()
    }
}

/// Contents of `source`: a path, `-` for stdin, or the name of a bundled
/// fixture when no such file exists.
fn read_source(source: &str) -> Result<Option<String>> {
    if source == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
        return Ok(Some(text));
    }
    if Path::new(source).is_file() {
        return std::fs::read_to_string(source)
            .map(Some)
            .with_context(|| format!("reading {source}"));
    }
    Ok(None)
}

fn fixture_name(source: &str) -> Option<&str> {
    let stem = source.strip_suffix(".json").unwrap_or(source);
    fixtures::NAMES.iter().copied().find(|n| *n == stem)
}

/// A gain graph, either bare or wrapped in a fixture document.
pub fn load_graph(source: &str) -> Result<Loaded> {
    let Some(text) = read_source(source)? else {
        let Some(name) = fixture_name(source) else {
            bail!("no such file and no bundled fixture named {source:?}");
        };
        let f = fixtures::load(name)?;
        return Ok(Loaded {
            graph: f.graph.clone(),
            fixture: Some(f),
        });
    };
    let value: Value = serde_json::from_str(&text).with_context(|| format!("{source} is not valid JSON"))?;
    if value.get("graph").is_some() {
        let f = Fixture::from_json(&text).with_context(|| format!("{source}: malformed fixture"))?;
        Ok(Loaded {
            graph: f.graph.clone(),
            fixture: Some(f),
        })
    } else {
        let graph = GainGraph::from_json(&text).with_context(|| format!("{source}: malformed gain graph"))?;
        Ok(Loaded { graph, fixture: None })
    }
}

pub fn load_covering(source: &str) -> Result<CoveringGraph> {
    let Some(text) = read_source(source)? else {
        bail!("no such file {source:?}");
    };
    CoveringGraph::from_json(&text).with_context(|| format!("{source}: malformed covering graph"))
}

/// Partitions from a file holding either one partition (a list of edge-id
/// lists), a list of partitions, an object of named partitions, or a fixture.
pub fn load_partitions(source: &str) -> Result<Vec<Vec<Vec<EdgeId>>>> {
    let text = match read_source(source)? {
        Some(text) => text,
        None => match fixture_name(source) {
            Some(name) => return Ok(fixtures::load(name)?.partitions.into_values().collect()),
            None => bail!("no such file {source:?}"),
        },
    };
    let value: Value = serde_json::from_str(&text).with_context(|| format!("{source} is not valid JSON"))?;
    if value.get("graph").is_some() {
        let f = Fixture::from_json(&text)?;
        return Ok(f.partitions.into_values().collect());
    }
    if let Ok(one) = serde_json::from_value::<Vec<Vec<EdgeId>>>(value.clone()) {
        return Ok(vec![one]);
    }
    if let Ok(many) = serde_json::from_value::<Vec<Vec<Vec<EdgeId>>>>(value.clone()) {
        return Ok(many);
    }
    if let Ok(named) = serde_json::from_value::<BTreeMap<String, Vec<Vec<EdgeId>>>>(value) {
        return Ok(named.into_values().collect());
    }
    bail!("{source}: expected a partition, a list of partitions or an object of named partitions")
}

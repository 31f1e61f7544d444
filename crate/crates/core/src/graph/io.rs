//! JSON graph files.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GroundGraph, VertexColor};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: i64,
    pub color: VertexColor,
}

/// On-disk form of a [`GroundGraph`].
///
/// Vertex ids are arbitrary distinct integers; they are renumbered
/// `0..n` in listing order when the graph is built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default)]
    pub name: String,
    pub vertices: Vec<VertexEntry>,
    #[serde(default)]
    pub edges: Vec<[i64; 2]>,
}

impl GraphFile {
    pub fn from_graph(g: &GroundGraph) -> Self {
        GraphFile {
            name: g.name().unwrap_or_default().to_string(),
            vertices: g
                .colors()
                .iter()
                .enumerate()
                .map(|(id, &color)| VertexEntry { id: id as i64, color })
                .collect(),
            edges: g.edges().into_iter().map(|(u, v)| [u as i64, v as i64]).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<GroundGraph> {
        let mut index = HashMap::with_capacity(self.vertices.len());
        for (i, entry) in self.vertices.iter().enumerate() {
            if index.insert(entry.id, i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id {}", entry.id)));
            }
        }
        let lookup = |id: i64| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("edge references unknown vertex {id}")))
        };
        let edges = self
            .edges
            .iter()
            .map(|&[a, b]| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let colors = self.vertices.iter().map(|e| e.color).collect();
        let g = GroundGraph::new(colors, edges)?;
        Ok(if self.name.is_empty() {
            g
        } else {
            g.with_name(self.name.clone())
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph files always serialize")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<GroundGraph> {
        Self::from_json(&std::fs::read_to_string(path)?)?.to_graph()
    }

    pub fn write(g: &GroundGraph, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, Self::from_graph(g).to_json())?;
        Ok(())
    }
}

//! Contraction of the association edges.
//!
//! Each AP absorbs its associated WDs. Interference edges then run between
//! AP groups; parallel edges are merged into one edge whose weight is 1
//! (uniform) or the number of merged edges (weighted).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::{Node, NodeKind};
use crate::graph::NetworkGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContractionMode {
    Uniform,
    Weighted,
}

impl ContractionMode {
    pub const ALL: [ContractionMode; 2] = [ContractionMode::Uniform, ContractionMode::Weighted];

    pub fn as_str(self) -> &'static str {
        match self {
            ContractionMode::Uniform => "uniform",
            ContractionMode::Weighted => "weighted",
        }
    }
}

impl std::fmt::Display for ContractionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedEdge {
    pub u: u32,
    pub v: u32,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractedGraph {
    pub mode: ContractionMode,
    pub ap_vertices: Vec<u32>,
    /// Sorted by `(u, v)` with `u < v`.
    pub edges: Vec<WeightedEdge>,
    /// Interference edges inside one group, which become self-loops and are
    /// dropped. Always 0 for graphs produced by the builder.
    pub dropped_self_loops: usize,
}

impl ContractedGraph {
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight as u64).sum()
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn contract(g: &NetworkGraph, mode: ContractionMode) -> ContractedGraph {
    let group: BTreeMap<u32, u32> = g.association.iter().map(|a| (a.wd, a.ap)).collect();
    let group_of = |n: Node| match n.kind {
        NodeKind::Ap => n.id,
        NodeKind::Wd => group[&n.id],
    };

    let mut counts: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut dropped = 0usize;
    for e in &g.interference_edges {
        let (a, b) = (group_of(e.u), group_of(e.v));
        if a == b {
            dropped += 1;
            continue;
        }
        *counts.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    if dropped > 0 {
        log::warn!("contraction dropped {dropped} intra-group interference edge(s)");
    }

    let edges = counts
        .into_iter()
        .map(|((u, v), n)| WeightedEdge {
            u,
            v,
            weight: match mode {
                ContractionMode::Uniform => 1,
                ContractionMode::Weighted => n,
            },
        })
        .collect();
    ContractedGraph {
        mode,
        ap_vertices: g.ap_vertices.clone(),
        edges,
        dropped_self_loops: dropped,
    }
}

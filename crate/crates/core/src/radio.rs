//! Physical-layer math: path loss, per-edge interference, SINR and the two
//! utilities.
//!
//! Powers are in dBm and gains in dB at the API boundary. Interference from
//! several edges is summed in linear milliwatts. [`DetailedModel`] and
//! [`SimplifiedModel`] precompute everything that does not depend on the
//! coloring, so that optimizers can evaluate thousands of colorings cheaply.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::contraction::ContractedGraph;
use crate::domain::{
    db_to_linear, Channel, Coloring, InterferenceMatrix, Node, NodeKind, RadioParams,
};
use crate::error::{Error, Result};
use crate::graph::NetworkGraph;

/// Distances below this are floored before entering the log-distance model.
pub const MIN_DISTANCE_M: f64 = 0.1;

/// Two-ray style propagation loss in dB:
/// `7.6 + 40 log10(d) - 20 log10(h_t h_r)`.
pub fn path_loss(d_m: f64, h_t_m: f64, h_r_m: f64) -> Result<f64> {
    if d_m.is_nan() || d_m <= 0.0 {
        return Err(Error::Domain(format!(
            "distance must be positive, got {d_m}"
        )));
    }
    if !(h_t_m > 0.0 && h_r_m > 0.0) {
        return Err(Error::Domain(format!(
            "antenna heights must be positive, got {h_t_m} and {h_r_m}"
        )));
    }
    Ok(7.6 + 40.0 * d_m.log10() - 20.0 * (h_t_m * h_r_m).log10())
}

/// Power received over a link of length `d_m`, in dBm. Same budget as
/// [`edge_interference`] without the channel and activity terms.
pub fn received_power_dbm(d_m: f64, p: &RadioParams) -> Result<f64> {
    Ok(p.tx_power_dbm + p.tx_gain_db + p.rx_gain_db
        - p.obstacle_loss_db
        - path_loss(d_m, p.tx_height_m, p.rx_height_m)?)
}

/// Interference carried by an edge between nodes on channels `ci` and `cj`:
/// `W_ij + P_t + G_t + G_r - L - P_loss + psi`, in dBm. `None` when the two
/// channels do not overlap at all.
pub fn edge_interference(
    ci: Channel,
    cj: Channel,
    d_m: f64,
    p: &RadioParams,
    w: &InterferenceMatrix,
) -> Result<Option<f64>> {
    let attenuation = w.db(ci, cj);
    let budget = received_power_dbm(d_m, p)? + p.activity_index_db;
    if attenuation == f64::NEG_INFINITY {
        return Ok(None);
    }
    Ok(Some(attenuation + budget))
}

/// Linear normalization of SINR into `[0, 1]` between the radio thresholds.
pub fn utility_from_sinr(sinr_db: f64, p: &RadioParams) -> f64 {
    if sinr_db == f64::INFINITY {
        return 1.0;
    }
    ((sinr_db - p.sinr_min_db) / (p.sinr_max_db - p.sinr_min_db)).clamp(0.0, 1.0)
}

/// SINR at one vertex, evaluated edge by edge in dB and summed in mW.
///
/// A WD's signal comes from its AP. An AP's signal is the strongest uplink
/// among its WDs; an AP with no WDs has nothing to receive and reports
/// `+inf`, as does any vertex with no contributing interferer.
///
/// This walks the whole edge list and is meant for inspection and checks;
/// use [`DetailedModel`] when evaluating many colorings.
pub fn sinr(
    v: Node,
    g: &NetworkGraph,
    c: &Coloring,
    p: &RadioParams,
    w: &InterferenceMatrix,
) -> Result<f64> {
    let assoc = g.association_map();
    let channel_of = |n: Node| -> Result<Channel> {
        let ap = match n.kind {
            NodeKind::Ap => n.id,
            NodeKind::Wd => *assoc
                .get(&n.id)
                .ok_or_else(|| Error::Validation(format!("{n} is not associated")))?,
        };
        c.channel(ap)
            .ok_or_else(|| Error::Validation(format!("coloring misses ap{ap}")))
    };

    let signal_dbm = match v.kind {
        NodeKind::Wd => {
            let a = g
                .association
                .iter()
                .find(|a| a.wd == v.id)
                .ok_or_else(|| Error::Validation(format!("{v} is not in the graph")))?;
            received_power_dbm(a.distance_m.max(MIN_DISTANCE_M), p)?
        }
        NodeKind::Ap => {
            if !g.ap_vertices.contains(&v.id) {
                return Err(Error::Validation(format!("{v} is not in the graph")));
            }
            let nearest = g
                .association
                .iter()
                .filter(|a| a.ap == v.id)
                .map(|a| a.distance_m)
                .min_by(f64::total_cmp);
            match nearest {
                Some(d) => received_power_dbm(d.max(MIN_DISTANCE_M), p)?,
                None => return Ok(f64::INFINITY),
            }
        }
    };

    let cv = channel_of(v)?;
    let mut interference_mw = 0.0;
    for e in &g.interference_edges {
        let other = if e.u == v {
            e.v
        } else if e.v == v {
            e.u
        } else {
            continue;
        };
        let cu = channel_of(other)?;
        if let Some(i_dbm) = edge_interference(cu, cv, e.distance_m.max(MIN_DISTANCE_M), p, w)? {
            interference_mw += db_to_linear(i_dbm);
        }
    }
    if interference_mw == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(signal_dbm - 10.0 * interference_mw.log10())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityReport {
    pub aps: BTreeMap<u32, f64>,
    pub wds: BTreeMap<u32, f64>,
    pub total: f64,
    pub mean: f64,
}

/// Detailed utility of every vertex under coloring `c`.
pub fn detailed_utility(
    g: &NetworkGraph,
    c: &Coloring,
    p: &RadioParams,
    w: &InterferenceMatrix,
) -> Result<UtilityReport> {
    c.check(&g.ap_vertices, w.k())?;
    let model = DetailedModel::new(g, p, w)?;
    let assignment = c.to_assignment(&g.ap_vertices)?;
    let per_vertex = model.per_vertex(&assignment);
    let (ap_part, wd_part) = per_vertex.split_at(g.ap_vertices.len());
    let total: f64 = per_vertex.iter().sum();
    let n = per_vertex.len();
    Ok(UtilityReport {
        aps: g
            .ap_vertices
            .iter()
            .copied()
            .zip(ap_part.iter().copied())
            .collect(),
        wds: g
            .wd_vertices
            .iter()
            .copied()
            .zip(wd_part.iter().copied())
            .collect(),
        total,
        mean: if n == 0 { 0.0 } else { total / n as f64 },
    })
}

/// Coloring-independent part of the detailed utility.
///
/// Vertices are indexed APs first (in `ap_vertices` order), then WDs. For
/// every vertex the incident interference edges are aggregated per
/// neighboring AP group: all vertices in a group share one channel, so their
/// linear gains can be pre-summed.
#[derive(Debug, Clone)]
pub struct DetailedModel {
    k: usize,
    n_aps: usize,
    /// AP index whose channel each vertex uses.
    group: Vec<u32>,
    /// Received signal in mW, `None` for APs without WDs.
    signal_mw: Vec<Option<f64>>,
    offsets: Vec<usize>,
    neighbor_group: Vec<u32>,
    gain_mw: Vec<f64>,
    overlap: Vec<f64>,
    radio: RadioParams,
}

impl DetailedModel {
    pub fn new(g: &NetworkGraph, p: &RadioParams, w: &InterferenceMatrix) -> Result<Self> {
        let n_aps = g.ap_vertices.len();
        let n = g.vertex_count();
        let ap_index: BTreeMap<u32, usize> = g
            .ap_vertices
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i))
            .collect();
        let wd_index: BTreeMap<u32, usize> = g
            .wd_vertices
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, n_aps + i))
            .collect();
        let lookup = |node: Node| -> Result<usize> {
            let idx = match node.kind {
                NodeKind::Ap => ap_index.get(&node.id),
                NodeKind::Wd => wd_index.get(&node.id),
            };
            idx.copied()
                .ok_or_else(|| Error::Validation(format!("{node} is not in the graph")))
        };

        let mut group: Vec<u32> = (0..n_aps as u32).collect();
        group.resize(n, u32::MAX);
        let mut signal_mw: Vec<Option<f64>> = vec![None; n];
        for a in &g.association {
            let wi = lookup(Node::wd(a.wd))?;
            let ai = lookup(Node::ap(a.ap))?;
            group[wi] = ai as u32;
            let s = db_to_linear(received_power_dbm(a.distance_m.max(MIN_DISTANCE_M), p)?);
            signal_mw[wi] = Some(s);
            // uplink: the AP hears its strongest WD
            signal_mw[ai] = Some(signal_mw[ai].map_or(s, |cur: f64| cur.max(s)));
        }
        if let Some(i) = group.iter().position(|&x| x == u32::MAX) {
            return Err(Error::Validation(format!(
                "wd{} has no association",
                g.wd_vertices[i - n_aps]
            )));
        }

        // (vertex, neighbor group) -> summed linear gain
        let mut acc: BTreeMap<(usize, u32), f64> = BTreeMap::new();
        for e in &g.interference_edges {
            let (ui, vi) = (lookup(e.u)?, lookup(e.v)?);
            let budget =
                received_power_dbm(e.distance_m.max(MIN_DISTANCE_M), p)? + p.activity_index_db;
            let gain = db_to_linear(budget);
            *acc.entry((ui, group[vi])).or_default() += gain;
            *acc.entry((vi, group[ui])).or_default() += gain;
        }
        let mut offsets = vec![0usize; n + 1];
        let mut neighbor_group = Vec::with_capacity(acc.len());
        let mut gain_mw = Vec::with_capacity(acc.len());
        for (&(v, grp), &gain) in &acc {
            offsets[v + 1] += 1;
            neighbor_group.push(grp);
            gain_mw.push(gain);
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }

        Ok(DetailedModel {
            k: w.k(),
            n_aps,
            group,
            signal_mw,
            offsets,
            neighbor_group,
            gain_mw,
            overlap: w.linear_table().to_vec(),
            radio: *p,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.group.len()
    }

    pub fn ap_count(&self) -> usize {
        self.n_aps
    }

    pub fn spectrum_size(&self) -> usize {
        self.k
    }

    /// SINR in dB of vertex `v` (dense index) under `assignment`.
    pub fn sinr(&self, v: usize, assignment: &[Channel]) -> f64 {
        let Some(signal) = self.signal_mw[v] else {
            return f64::INFINITY;
        };
        let row = (assignment[self.group[v] as usize] as usize - 1) * self.k;
        let overlap = &self.overlap[row..row + self.k];
        let span = self.offsets[v]..self.offsets[v + 1];
        let interference: f64 = self.neighbor_group[span.clone()]
            .iter()
            .zip(&self.gain_mw[span])
            .map(|(&grp, &gain)| gain * overlap[assignment[grp as usize] as usize - 1])
            .sum();
        if interference == 0.0 {
            return f64::INFINITY;
        }
        10.0 * (signal / interference).log10()
    }

    pub fn utility(&self, v: usize, assignment: &[Channel]) -> f64 {
        utility_from_sinr(self.sinr(v, assignment), &self.radio)
    }

    pub fn per_vertex(&self, assignment: &[Channel]) -> Vec<f64> {
        debug_assert_eq!(assignment.len(), self.n_aps);
        (0..self.vertex_count())
            .map(|v| self.utility(v, assignment))
            .collect()
    }

    /// Sum of detailed utilities over all vertices.
    pub fn total(&self, assignment: &[Channel]) -> f64 {
        debug_assert_eq!(assignment.len(), self.n_aps);
        (0..self.vertex_count())
            .map(|v| self.utility(v, assignment))
            .sum()
    }

    /// For every AP group, the linear gains its members receive from each
    /// foreign group, summed over members.
    pub(crate) fn group_gains(&self) -> Vec<Vec<(u32, f64)>> {
        let mut per_group: Vec<BTreeMap<u32, f64>> = vec![BTreeMap::new(); self.n_aps];
        for v in 0..self.vertex_count() {
            let own = self.group[v] as usize;
            for e in self.offsets[v]..self.offsets[v + 1] {
                *per_group[own].entry(self.neighbor_group[e]).or_default() += self.gain_mw[e];
            }
        }
        per_group
            .into_iter()
            .map(|m| m.into_iter().collect())
            .collect()
    }

    pub(crate) fn overlap_linear(&self, ci: Channel, cj: Channel) -> f64 {
        self.overlap[(ci as usize - 1) * self.k + cj as usize - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplifiedReport {
    pub per_vertex: BTreeMap<u32, f64>,
    /// Sum over vertices; every edge is counted from both endpoints.
    pub total: f64,
    pub mean: f64,
}

/// Weighted channel-overlap sum at every AP of a contracted graph.
///
/// Lower is better. Overlaps are linear fractions (`10^(W/10)`), so a
/// co-channel edge of weight 3 contributes 3.
pub fn simplified_utility(
    cg: &ContractedGraph,
    c: &Coloring,
    w: &InterferenceMatrix,
) -> Result<SimplifiedReport> {
    c.check(&cg.ap_vertices, w.k())?;
    let model = SimplifiedModel::new(cg, w)?;
    let assignment = c.to_assignment(&cg.ap_vertices)?;
    let values = model.per_vertex(&assignment);
    let total: f64 = values.iter().sum();
    let n = values.len();
    Ok(SimplifiedReport {
        per_vertex: cg.ap_vertices.iter().copied().zip(values).collect(),
        total,
        mean: if n == 0 { 0.0 } else { total / n as f64 },
    })
}

/// Adjacency of a contracted graph prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub struct SimplifiedModel {
    k: usize,
    offsets: Vec<usize>,
    neighbor: Vec<u32>,
    weight: Vec<f64>,
    overlap: Vec<f64>,
}

impl SimplifiedModel {
    pub fn new(cg: &ContractedGraph, w: &InterferenceMatrix) -> Result<Self> {
        let n = cg.ap_vertices.len();
        let index: BTreeMap<u32, usize> = cg
            .ap_vertices
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i))
            .collect();
        let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for e in &cg.edges {
            let lookup = |id: u32| {
                index
                    .get(&id)
                    .copied()
                    .ok_or_else(|| Error::Validation(format!("ap{id} is not in the graph")))
            };
            let (u, v) = (lookup(e.u)?, lookup(e.v)?);
            adj[u].push((v as u32, e.weight as f64));
            adj[v].push((u as u32, e.weight as f64));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut neighbor = Vec::new();
        let mut weight = Vec::new();
        for list in adj {
            for (v, wt) in list {
                neighbor.push(v);
                weight.push(wt);
            }
            offsets.push(neighbor.len());
        }
        Ok(SimplifiedModel {
            k: w.k(),
            offsets,
            neighbor,
            weight,
            overlap: w.linear_table().to_vec(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn value(&self, v: usize, assignment: &[Channel]) -> f64 {
        let row = (assignment[v] as usize - 1) * self.k;
        let span = self.offsets[v]..self.offsets[v + 1];
        self.neighbor[span.clone()]
            .iter()
            .zip(&self.weight[span])
            .map(|(&u, &wt)| wt * self.overlap[row + assignment[u as usize] as usize - 1])
            .sum()
    }

    pub fn per_vertex(&self, assignment: &[Channel]) -> Vec<f64> {
        (0..self.vertex_count())
            .map(|v| self.value(v, assignment))
            .collect()
    }

    pub fn total(&self, assignment: &[Channel]) -> f64 {
        (0..self.vertex_count())
            .map(|v| self.value(v, assignment))
            .sum()
    }
}

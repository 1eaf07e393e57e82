//! The two-layer network graph.
//!
//! Association edges form the bipartite nearest-neighbor graph from WDs to
//! APs. Interference edges are the subset of the per-type unit-disk graphs
//! that survive the same-AP exclusion: devices served by one AP are
//! coordinated by it, so they interfere neither with each other nor with
//! their own AP.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::{Node, NodeKind, Scenario, Site};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Association {
    pub wd: u32,
    pub ap: u32,
    pub distance_m: f64,
}

/// An interference edge with `u < v` in node order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceEdge {
    pub u: Node,
    pub v: Node,
    pub distance_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkGraph {
    pub ap_vertices: Vec<u32>,
    pub wd_vertices: Vec<u32>,
    /// One entry per WD, in `wd_vertices` order.
    pub association: Vec<Association>,
    pub interference_edges: Vec<InterferenceEdge>,
}

impl NetworkGraph {
    pub fn vertex_count(&self) -> usize {
        self.ap_vertices.len() + self.wd_vertices.len()
    }

    pub fn association_map(&self) -> BTreeMap<u32, u32> {
        self.association.iter().map(|a| (a.wd, a.ap)).collect()
    }

    /// Serving AP of a node: itself for an AP, the associated AP for a WD.
    pub fn serving_ap(&self, node: Node) -> Option<u32> {
        match node.kind {
            NodeKind::Ap => self.ap_vertices.contains(&node.id).then_some(node.id),
            NodeKind::Wd => self
                .association
                .iter()
                .find(|a| a.wd == node.id)
                .map(|a| a.ap),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Maps every WD to its nearest AP, ties going to the smallest AP id.
pub fn associate(s: &Scenario) -> Result<BTreeMap<u32, u32>> {
    Ok(associate_with_distance(s)?
        .into_iter()
        .map(|a| (a.wd, a.ap))
        .collect())
}

fn associate_with_distance(s: &Scenario) -> Result<Vec<Association>> {
    if s.wds.is_empty() {
        return Ok(Vec::new());
    }
    if s.aps.is_empty() {
        return Err(Error::NoAccessPoint);
    }
    Ok(s.wds
        .iter()
        .map(|wd| {
            let (ap, distance_m) = s
                .aps
                .iter()
                .map(|ap| (ap.id, wd.distance(ap)))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                .expect("at least one AP");
            Association {
                wd: wd.id,
                ap,
                distance_m,
            }
        })
        .collect())
}

/// Emits every interference edge of the scenario, sorted by `(u, v)`.
///
/// `assoc` must cover every WD of `s`.
pub fn build_interference_edges(s: &Scenario, assoc: &BTreeMap<u32, u32>) -> Vec<InterferenceEdge> {
    let mut nodes: Vec<(Node, &Site, u32)> = Vec::with_capacity(s.aps.len() + s.wds.len());
    nodes.extend(s.aps.iter().map(|a| (Node::ap(a.id), a, a.id)));
    nodes.extend(s.wds.iter().map(|w| {
        let ap = *assoc
            .get(&w.id)
            .unwrap_or_else(|| panic!("wd{} has no association", w.id));
        (Node::wd(w.id), w, ap)
    }));
    nodes.sort_by_key(|(n, _, _)| *n);

    let r = &s.interference_radii;
    let mut edges = Vec::new();
    for (i, &(u, su, gu)) in nodes.iter().enumerate() {
        for &(v, sv, gv) in &nodes[i + 1..] {
            // Same serving AP covers both same-AP WD pairs and WD-own-AP
            // pairs; two distinct APs always differ here.
            if gu == gv {
                continue;
            }
            let d = su.distance(sv);
            if d <= r.for_pair(u.kind, v.kind) {
                edges.push(InterferenceEdge {
                    u,
                    v,
                    distance_m: d,
                });
            }
        }
    }
    edges
}

/// Builds the network graph of a validated scenario.
pub fn build_graph(s: &Scenario) -> Result<NetworkGraph> {
    let violations = s.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidScenario(violations));
    }
    let association = associate_with_distance(s)?;
    let assoc_map = association.iter().map(|a| (a.wd, a.ap)).collect();
    let interference_edges = build_interference_edges(s, &assoc_map);
    Ok(NetworkGraph {
        ap_vertices: s.aps.iter().map(|a| a.id).collect(),
        wd_vertices: s.wds.iter().map(|w| w.id).collect(),
        association,
        interference_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::InterferenceRadii;

    fn scenario(
        aps: &[(u32, f64, f64)],
        wds: &[(u32, f64, f64)],
        radii: (f64, f64, f64),
    ) -> Scenario {
        let mut s = Scenario::new(
            100.0,
            100.0,
            aps.iter().map(|&(i, x, y)| Site::new(i, x, y)).collect(),
            wds.iter().map(|&(i, x, y)| Site::new(i, x, y)).collect(),
        );
        s.interference_radii = InterferenceRadii {
            ap_ap: radii.0,
            ap_wd: radii.1,
            wd_wd: radii.2,
        };
        s
    }

    #[test]
    fn nearest_ap_wins() {
        let s = scenario(
            &[(0, 1.0, 0.0), (1, 3.0, 0.0)],
            &[(0, 0.0, 0.0)],
            (1.0, 1.0, 1.0),
        );
        assert_eq!(associate(&s).unwrap()[&0], 0);
    }

    #[test]
    fn tie_goes_to_smallest_id() {
        // listed in reverse order so that the tie rule, not iteration order, decides
        let s = scenario(
            &[(7, 3.0, 0.0), (2, 1.0, 0.0)],
            &[(0, 2.0, 0.0)],
            (1.0, 1.0, 1.0),
        );
        assert_eq!(associate(&s).unwrap()[&0], 2);
    }

    #[test]
    fn no_wds_no_associations() {
        let s = scenario(&[(0, 1.0, 0.0)], &[], (1.0, 1.0, 1.0));
        assert!(associate(&s).unwrap().is_empty());
    }

    #[test]
    fn wds_without_aps_fail() {
        let s = scenario(&[], &[(0, 1.0, 0.0)], (1.0, 1.0, 1.0));
        assert!(matches!(associate(&s), Err(Error::NoAccessPoint)));
        assert!(matches!(build_graph(&s), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn same_ap_wds_do_not_interfere() {
        let s = scenario(
            &[(0, 10.0, 10.0)],
            &[(0, 11.0, 10.0), (1, 12.0, 10.0)],
            (50.0, 50.0, 50.0),
        );
        let g = build_graph(&s).unwrap();
        assert!(g.interference_edges.is_empty());
        assert_eq!(g.association.len(), 2);
    }

    #[test]
    fn aps_within_radius_interfere() {
        let s = scenario(&[(0, 10.0, 10.0), (1, 15.0, 10.0)], &[], (5.0, 1.0, 1.0));
        let g = build_graph(&s).unwrap();
        assert_eq!(
            g.interference_edges,
            vec![InterferenceEdge {
                u: Node::ap(0),
                v: Node::ap(1),
                distance_m: 5.0
            }]
        );
    }

    #[test]
    fn wd_interferes_with_foreign_ap() {
        // w1 -> a (distance 1), b is 2 away from w1
        let s = scenario(
            &[(0, 10.0, 10.0), (1, 13.0, 10.0)],
            &[(1, 11.0, 10.0)],
            (1.0, 2.0, 1.0),
        );
        let g = build_graph(&s).unwrap();
        assert_eq!(g.association_map()[&1], 0);
        assert_eq!(
            g.interference_edges,
            vec![InterferenceEdge {
                u: Node::ap(1),
                v: Node::wd(1),
                distance_m: 2.0
            }]
        );
    }

    #[test]
    fn isolated_aps() {
        let s = scenario(&[(0, 0.0, 0.0), (1, 90.0, 90.0)], &[], (10.0, 10.0, 10.0));
        let g = build_graph(&s).unwrap();
        assert!(g.interference_edges.is_empty() && g.association.is_empty());
    }

    #[test]
    fn two_cells_match_brute_force() {
        // a@(10,10), b@(20,10); w1 near a, w2 near b, w1-w2 3 m apart
        let s = scenario(
            &[(0, 10.0, 10.0), (1, 20.0, 10.0)],
            &[(1, 13.5, 10.0), (2, 16.5, 10.0)],
            (12.0, 5.0, 4.0),
        );
        let g = build_graph(&s).unwrap();
        let got: Vec<(Node, Node)> = g.interference_edges.iter().map(|e| (e.u, e.v)).collect();
        // brute force over all pairs with the exclusion rule
        let assoc = associate(&s).unwrap();
        let mut pts: Vec<(Node, Site, u32)> =
            s.aps.iter().map(|a| (Node::ap(a.id), *a, a.id)).collect();
        pts.extend(s.wds.iter().map(|w| (Node::wd(w.id), *w, assoc[&w.id])));
        let mut want = Vec::new();
        for a in &pts {
            for b in &pts {
                if a.0 < b.0
                    && a.2 != b.2
                    && a.1.distance(&b.1) <= s.interference_radii.for_pair(a.0.kind, b.0.kind)
                {
                    want.push((a.0, b.0));
                }
            }
        }
        want.sort();
        assert_eq!(got, want);
        assert!(got.contains(&(Node::ap(0), Node::ap(1))));
        assert!(got.contains(&(Node::wd(1), Node::wd(2))));
        // a-w2 and b-w1 are 6.5 m apart, beyond the 5 m AP-WD radius
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn build_is_deterministic() {
        let s = scenario(
            &[(0, 10.0, 10.0), (1, 20.0, 10.0), (2, 30.0, 30.0)],
            &[(0, 12.0, 11.0), (1, 19.0, 14.0), (2, 25.0, 25.0)],
            (30.0, 30.0, 30.0),
        );
        let a = build_graph(&s).unwrap().to_json().unwrap();
        let b = build_graph(&s).unwrap().to_json().unwrap();
        assert_eq!(a, b);
        assert_eq!(
            NetworkGraph::from_json(&a).unwrap(),
            build_graph(&s).unwrap()
        );
    }
}

//! Weighted directed country graphs and their Top-k In/Out restrictions.
//!
//! [`Digraph`] is the shared index-based representation every algorithm in the
//! crate works on. Nodes are kept in lexicographic code order, so node index
//! order and country code order always agree; several tie-breaks rely on that.

use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::country::CountryCode;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: u64,
}

/// Simple weighted digraph: no self-loops, no parallel edges, weights >= 1.
#[derive(Clone)]
pub struct Digraph {
    nodes: Arc<[CountryCode]>,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<(usize, u64)>>,
    in_adj: Vec<Vec<(usize, u64)>>,
}

impl Digraph {
    /// Builds a graph from a strictly increasing node list and index-based edges.
    pub fn new(
        nodes: impl Into<Arc<[CountryCode]>>,
        edges: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Self> {
        let nodes = nodes.into();
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "node list must be strictly increasing".into(),
            ));
        }
        let n = nodes.len();
        let mut list = Vec::new();
        for (source, target, weight) in edges {
            if source >= n || target >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({source},{target}) out of range for {n} nodes"
                )));
            }
            if source == target {
                return Err(Error::SelfLoop(nodes[source].to_string()));
            }
            if weight == 0 {
                return Err(Error::NonPositiveWeight {
                    origin: nodes[source].to_string(),
                    destination: nodes[target].to_string(),
                });
            }
            list.push(Edge {
                source,
                target,
                weight,
            });
        }
        list.sort_unstable();
        if let Some(w) = list
            .windows(2)
            .find(|w| (w[0].source, w[0].target) == (w[1].source, w[1].target))
        {
            return Err(Error::DuplicateEdge {
                origin: nodes[w[0].source].to_string(),
                destination: nodes[w[0].target].to_string(),
            });
        }
        Ok(Self::from_sorted(nodes, list))
    }

    /// Builds a graph from country-coded edges; the node set is `nodes` plus every endpoint.
    pub fn from_coded(
        nodes: impl IntoIterator<Item = CountryCode>,
        edges: impl IntoIterator<Item = (CountryCode, CountryCode, u64)>,
    ) -> Result<Self> {
        let edges: Vec<_> = edges.into_iter().collect();
        let mut all: Vec<CountryCode> = nodes.into_iter().collect();
        all.extend(edges.iter().flat_map(|&(a, b, _)| [a, b]));
        all.sort_unstable();
        all.dedup();
        let idx = |c: &CountryCode| all.binary_search(c).expect("node present");
        let indexed: Vec<_> = edges.iter().map(|(a, b, w)| (idx(a), idx(b), *w)).collect();
        Self::new(all, indexed)
    }

    fn from_sorted(nodes: Arc<[CountryCode]>, edges: Vec<Edge>) -> Self {
        let n = nodes.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for e in &edges {
            out_adj[e.source].push((e.target, e.weight));
            in_adj[e.target].push((e.source, e.weight));
        }
        for list in &mut in_adj {
            list.sort_unstable();
        }
        Self {
            nodes,
            edges,
            out_adj,
            in_adj,
        }
    }

    /// Same node set, a subset of edges (caller guarantees the edges come from `self`).
    pub(crate) fn with_edges(&self, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        Self::from_sorted(self.nodes.clone(), edges)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[CountryCode] {
        &self.nodes
    }

    pub fn index_of(&self, code: CountryCode) -> Option<usize> {
        self.nodes.binary_search(&code).ok()
    }

    /// Edges sorted by (source, target).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Outgoing `(target, weight)` pairs, sorted by target.
    pub fn out_edges(&self, node: usize) -> &[(usize, u64)] {
        &self.out_adj[node]
    }

    /// Incoming `(source, weight)` pairs, sorted by source.
    pub fn in_edges(&self, node: usize) -> &[(usize, u64)] {
        &self.in_adj[node]
    }

    pub fn weight(&self, source: usize, target: usize) -> Option<u64> {
        let list = &self.out_adj[source];
        list.binary_search_by_key(&target, |&(t, _)| t)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_edge(&self, source: usize, target: usize) -> bool {
        self.weight(source, target).is_some()
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_adj[node].len()
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.in_adj[node].len()
    }

    pub fn out_strength(&self, node: usize) -> u64 {
        self.out_adj[node].iter().map(|&(_, w)| w).sum()
    }

    pub fn in_strength(&self, node: usize) -> u64 {
        self.in_adj[node].iter().map(|&(_, w)| w).sum()
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Neighbors in either direction, sorted and deduplicated.
    pub fn undirected_neighbors(&self, node: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.out_adj[node]
            .iter()
            .chain(&self.in_adj[node])
            .map(|&(m, _)| m)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Copy of the graph with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidParameter(
                "scale factor must be positive".into(),
            ));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                weight: e.weight * factor,
                ..*e
            })
            .collect();
        Ok(Self::from_sorted(self.nodes.clone(), edges))
    }

    /// Country-coded edges `(origin, destination, weight)` in canonical order.
    pub fn coded_edges(&self) -> impl Iterator<Item = (CountryCode, CountryCode, u64)> + '_ {
        self.edges
            .iter()
            .map(|e| (self.nodes[e.source], self.nodes[e.target], e.weight))
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for Digraph {}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("nodes", &self.nodes.len())
            .field("edges", &self.edges.len())
            .finish()
    }
}

/// Country-level flow graph: `w_ij` counts distinct tourists living in `i` who visited `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobilityGraph {
    pub label: String,
    graph: Digraph,
}

impl MobilityGraph {
    pub fn new(label: impl Into<String>, graph: Digraph) -> Self {
        Self {
            label: label.into(),
            graph,
        }
    }

    pub fn digraph(&self) -> &Digraph {
        &self.graph
    }

    pub fn into_digraph(self) -> Digraph {
        self.graph
    }
}

impl Deref for MobilityGraph {
    type Target = Digraph;

    fn deref(&self) -> &Digraph {
        &self.graph
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Direction::In => Direction::Out,
            Direction::Out => Direction::In,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::In => "In",
            Direction::Out => "Out",
        })
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "in" => Ok(Direction::In),
            "out" => Ok(Direction::Out),
            _ => Err(Error::InvalidParameter(format!("unknown direction `{s}`"))),
        }
    }
}

/// `G_in,k` or `G_out,k`: same node set as the base, each node keeping only its
/// `k` heaviest incoming (In) or outgoing (Out) edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopKSubgraph {
    pub direction: Direction,
    pub k: usize,
    graph: Digraph,
}

impl TopKSubgraph {
    pub fn digraph(&self) -> &Digraph {
        &self.graph
    }

    /// Short tag such as `out3`.
    pub fn tag(&self) -> String {
        format!("{}{}", self.direction.as_str(), self.k)
    }

    /// Reinterprets an existing graph as a subgraph without re-selecting edges.
    pub fn from_parts(direction: Direction, k: usize, graph: Digraph) -> Self {
        Self {
            direction,
            k,
            graph,
        }
    }
}

impl Deref for TopKSubgraph {
    type Target = Digraph;

    fn deref(&self) -> &Digraph {
        &self.graph
    }
}

/// Keeps, for every node, the `k` highest-weight incoming edges.
/// Equal weights prefer the lexicographically smaller origin.
pub fn topk_in(g: &Digraph, k: usize) -> Result<TopKSubgraph> {
    topk(g, k, Direction::In)
}

/// Keeps, for every node, the `k` highest-weight outgoing edges.
/// Equal weights prefer the lexicographically smaller destination.
pub fn topk_out(g: &Digraph, k: usize) -> Result<TopKSubgraph> {
    topk(g, k, Direction::Out)
}

pub fn topk(g: &Digraph, k: usize, direction: Direction) -> Result<TopKSubgraph> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut kept = Vec::new();
    let mut candidates: Vec<(usize, u64)> = Vec::new();
    for v in 0..g.node_count() {
        candidates.clear();
        candidates.extend_from_slice(match direction {
            Direction::In => g.in_edges(v),
            Direction::Out => g.out_edges(v),
        });
        // node index order is code order
        candidates.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for &(other, weight) in candidates.iter().take(k) {
            let (source, target) = match direction {
                Direction::In => (other, v),
                Direction::Out => (v, other),
            };
            kept.push(Edge {
                source,
                target,
                weight,
            });
        }
    }
    Ok(TopKSubgraph {
        direction,
        k,
        graph: g.with_edges(kept),
    })
}

/// Edge set of `g` as `(source, target)` pairs.
pub fn edge_pairs(g: &Digraph) -> HashSet<(usize, usize)> {
    g.edges().iter().map(|e| (e.source, e.target)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cc(s: &str) -> CountryCode {
        s.parse().unwrap()
    }

    fn graph(edges: &[(&str, &str, u64)]) -> Digraph {
        Digraph::from_coded([], edges.iter().map(|&(a, b, w)| (cc(a), cc(b), w))).unwrap()
    }

    #[test]
    fn rejects_self_loops_duplicates_and_zero_weights() {
        let n: Vec<_> = ["AA", "BB"].iter().map(|s| cc(s)).collect();
        assert!(matches!(
            Digraph::new(n.clone(), [(0, 0, 1)]),
            Err(Error::SelfLoop(_))
        ));
        assert!(matches!(
            Digraph::new(n.clone(), [(0, 1, 1), (0, 1, 2)]),
            Err(Error::DuplicateEdge { .. })
        ));
        assert!(matches!(
            Digraph::new(n.clone(), [(0, 1, 0)]),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(Digraph::new(vec![cc("BB"), cc("AA")], []).is_err());
    }

    #[test]
    fn topk_in_keeps_heaviest_incoming() {
        let g = graph(&[("AA", "CC", 5), ("BB", "CC", 2)]);
        let sg = topk_in(&g, 1).unwrap();
        let e: Vec<_> = sg.coded_edges().collect();
        assert_eq!(e, vec![(cc("AA"), cc("CC"), 5)]);
    }

    #[test]
    fn topk_in_tie_prefers_smaller_origin() {
        let g = graph(&[("BB", "CC", 5), ("AA", "CC", 5)]);
        let sg = topk_in(&g, 1).unwrap();
        assert_eq!(sg.coded_edges().next().unwrap().0, cc("AA"));
    }

    #[test]
    fn topk_out_keeps_heaviest_outgoing() {
        let g = graph(&[("AA", "BB", 1), ("AA", "CC", 9)]);
        let sg = topk_out(&g, 1).unwrap();
        let e: Vec<_> = sg.coded_edges().collect();
        assert_eq!(e, vec![(cc("AA"), cc("CC"), 9)]);
    }

    #[test]
    fn large_k_is_identity_and_zero_k_is_rejected() {
        let g = graph(&[("AA", "BB", 1), ("AA", "CC", 9), ("CC", "BB", 2)]);
        assert_eq!(topk_out(&g, 5).unwrap().digraph(), &g);
        assert!(topk_in(&g, 0).is_err());
    }

    #[test]
    fn subgraph_shares_node_set() {
        let g = Digraph::from_coded([cc("ZZ")], [(cc("AA"), cc("BB"), 3)]).unwrap();
        let sg = topk_in(&g, 1).unwrap();
        assert_eq!(sg.nodes(), g.nodes());
        assert_eq!(sg.tag(), "in1");
    }
}

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, Direction, TopKSubgraph};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadCensus {
    pub mutual: u64,
    pub asymmetric: u64,
    pub null: u64,
}

impl DyadCensus {
    pub fn total(&self) -> u64 {
        self.mutual + self.asymmetric + self.null
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedValue {
    pub direction: Direction,
    pub value: f64,
}

/// Shortest-path summary over reachable ordered pairs `(s, t)`, `s != t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSummary {
    pub average: Option<f64>,
    pub diameter: Option<u64>,
    pub reachable_pairs: u64,
    pub unreachable_pairs: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub density: f64,
    pub avg_geodesic: Option<f64>,
    pub diameter: Option<u64>,
    pub reachable_pairs: u64,
    pub unreachable_pairs: u64,
    pub avg_degree: f64,
    /// Present when the graph has at least three nodes.
    pub degree_centralization: Option<DirectedValue>,
    pub avg_strength: f64,
    pub dyads: DyadCensus,
    pub reciprocity: f64,
    pub transitivity: f64,
}

pub fn dyad_census(g: &Digraph) -> DyadCensus {
    let n = g.node_count() as u64;
    let mut mutual = 0;
    let mut asymmetric = 0;
    for e in g.edges() {
        if g.has_edge(e.target, e.source) {
            if e.source < e.target {
                mutual += 1;
            }
        } else {
            asymmetric += 1;
        }
    }
    let pairs = n * n.saturating_sub(1) / 2;
    DyadCensus {
        mutual,
        asymmetric,
        null: pairs - mutual - asymmetric,
    }
}

/// Fraction of edges whose reverse edge also exists; 0 for an empty graph.
pub fn reciprocity(g: &Digraph) -> f64 {
    let d = dyad_census(g);
    let arcs = 2 * d.mutual + d.asymmetric;
    if arcs == 0 {
        0.0
    } else {
        (2 * d.mutual) as f64 / arcs as f64
    }
}

/// Global clustering coefficient of the undirected projection:
/// `3 * triangles / connected triples` (0 when there are no triples).
pub fn transitivity(g: &Digraph) -> f64 {
    let n = g.node_count();
    let neighbors: Vec<Vec<usize>> = (0..n).map(|v| g.undirected_neighbors(v)).collect();
    let mut mark = vec![false; n];
    let mut closed = 0u64; // each triangle seen 6 times
    let mut triples = 0u64;
    for v in 0..n {
        let d = neighbors[v].len() as u64;
        triples += d * d.saturating_sub(1) / 2;
        for &u in &neighbors[v] {
            mark[u] = true;
        }
        for &u in &neighbors[v] {
            closed += neighbors[u].iter().filter(|&&w| w != v && mark[w]).count() as u64;
        }
        for &u in &neighbors[v] {
            mark[u] = false;
        }
    }
    if triples == 0 {
        0.0
    } else {
        // closed counts ordered (u, w) pairs per apex: 2 per triangle per apex
        (closed / 2) as f64 / triples as f64
    }
}

/// Unweighted BFS geodesics from every node.
pub fn geodesics(g: &Digraph) -> GeodesicSummary {
    let n = g.node_count();
    let mut dist = vec![u64::MAX; n];
    let mut queue = VecDeque::new();
    let mut total = 0u64;
    let mut reachable = 0u64;
    let mut diameter = 0u64;
    for s in 0..n {
        dist.fill(u64::MAX);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in g.out_edges(v) {
                if dist[w] == u64::MAX {
                    dist[w] = dist[v] + 1;
                    total += dist[w];
                    reachable += 1;
                    diameter = diameter.max(dist[w]);
                    queue.push_back(w);
                }
            }
        }
    }
    let ordered = (n as u64) * (n as u64).saturating_sub(1);
    GeodesicSummary {
        average: (reachable > 0).then(|| total as f64 / reachable as f64),
        diameter: (reachable > 0).then_some(diameter),
        reachable_pairs: reachable,
        unreachable_pairs: ordered - reachable,
    }
}

/// Freeman-style degree centralization: `sum_v (d_max - d_v) / (n - 1)^2`.
pub fn degree_centralization(g: &Digraph, direction: Direction) -> Result<f64> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::TooFewNodes {
            required: 3,
            actual: n,
        });
    }
    let degrees: Vec<usize> = (0..n)
        .map(|v| match direction {
            Direction::In => g.in_degree(v),
            Direction::Out => g.out_degree(v),
        })
        .collect();
    let max = degrees.iter().copied().max().unwrap_or(0);
    let spread: usize = degrees.iter().map(|&d| max - d).sum();
    let denom = ((n - 1) * (n - 1)) as f64;
    Ok(spread as f64 / denom)
}

/// Full statistics for a Top-k subgraph. Degree centralization is taken on the
/// direction the subgraph does not constrain (out-degree for Top-k In, in-degree
/// for Top-k Out).
pub fn structural_report(sg: &TopKSubgraph) -> Result<StructuralReport> {
    structural_report_for(sg.digraph(), sg.direction.opposite())
}

pub fn structural_report_for(g: &Digraph, centralization: Direction) -> Result<StructuralReport> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes {
            required: 2,
            actual: n,
        });
    }
    let m = g.edge_count();
    let geo = geodesics(g);
    let degree_centralization = if n >= 3 {
        Some(DirectedValue {
            direction: centralization,
            value: degree_centralization(g, centralization)?,
        })
    } else {
        None
    };
    Ok(StructuralReport {
        node_count: n,
        edge_count: m,
        density: m as f64 / (n * (n - 1)) as f64,
        avg_geodesic: geo.average,
        diameter: geo.diameter,
        reachable_pairs: geo.reachable_pairs,
        unreachable_pairs: geo.unreachable_pairs,
        avg_degree: m as f64 / n as f64,
        degree_centralization,
        avg_strength: g.total_weight() as f64 / n as f64,
        dyads: dyad_census(g),
        reciprocity: reciprocity(g),
        transitivity: transitivity(g),
    })
}

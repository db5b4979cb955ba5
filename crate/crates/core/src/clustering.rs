//! Normalized flow distances and average-linkage agglomerative clustering.
//!
//! Out subgraphs are normalized by row and In subgraphs by column, so each
//! country's weights in the constrained direction sum to one; distance is one
//! minus that share. The resulting matrix is asymmetric. The linkage criterion
//! averages both orientations over all cross-cluster pairs.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::country::CountryCode;
use crate::error::{Error, Result};
use crate::graph::{Digraph, Direction, TopKSubgraph};
use crate::report::sig6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    ByRow,
    ByColumn,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub countries: Vec<CountryCode>,
    /// Row-major `n x n`.
    pub values: Vec<f64>,
    pub normalization: Normalization,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.countries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.countries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    /// Builds a matrix from explicit values (row-major).
    pub fn from_values(
        countries: Vec<CountryCode>,
        values: Vec<f64>,
        normalization: Normalization,
    ) -> Result<Self> {
        if values.len() != countries.len() * countries.len() {
            return Err(Error::Mismatch(format!(
                "{} values for {} countries",
                values.len(),
                countries.len()
            )));
        }
        Ok(Self {
            countries,
            values,
            normalization,
        })
    }

    /// Dense CSV with a header row and a leading country column.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let header: Vec<&str> = self.countries.iter().map(|c| c.as_str()).collect();
        writeln!(out, "country,{}", header.join(","))?;
        for (i, c) in self.countries.iter().enumerate() {
            let row: Vec<String> = (0..self.len()).map(|j| sig6(self.get(i, j))).collect();
            writeln!(out, "{c},{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Row normalization for Top-k Out, column normalization for Top-k In.
pub fn distance_matrix(sg: &TopKSubgraph) -> DistanceMatrix {
    let normalization = match sg.direction {
        Direction::Out => Normalization::ByRow,
        Direction::In => Normalization::ByColumn,
    };
    distance_matrix_for(sg.digraph(), normalization)
}

/// `d_ij = 1 - n(w_ij)`. Countries whose row (or column) carries no weight get
/// distance 1 everywhere in it; the diagonal is 1.
pub fn distance_matrix_for(g: &Digraph, normalization: Normalization) -> DistanceMatrix {
    let n = g.node_count();
    let mut values = vec![1.0; n * n];
    for e in g.edges() {
        let total = match normalization {
            Normalization::ByRow => g.out_strength(e.source),
            Normalization::ByColumn => g.in_strength(e.target),
        };
        values[e.source * n + e.target] = 1.0 - e.weight as f64 / total as f64;
    }
    DistanceMatrix {
        countries: g.nodes().to_vec(),
        values,
        normalization,
    }
}

/// One agglomeration step. Leaves are ids `0..n`; the cluster formed at step
/// `s` gets id `n + s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaves: usize,
    pub merges: Vec<Merge>,
}

fn tie_eps(best: f64) -> f64 {
    1e-12 * best.abs().max(1.0)
}

/// Whether `(value, pair)` beats the current best under the "lowest value, then
/// smallest id pair" rule, treating values within a relative 1e-12 as equal.
pub(crate) fn better(
    value: f64,
    pair: (usize, usize),
    best: Option<(f64, (usize, usize))>,
) -> bool {
    match best {
        None => true,
        Some((bv, bp)) => {
            let eps = tie_eps(bv);
            value < bv - eps || ((value - bv).abs() <= eps && pair < bp)
        }
    }
}

/// Full average-linkage dendrogram over the mean-symmetrized distances.
pub fn linkage(dm: &DistanceMatrix) -> Dendrogram {
    let n = dm.len();
    // pairwise sums of symmetrized distances between active clusters
    let mut sums = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sums[i * n + j] = 0.5 * (dm.get(i, j) + dm.get(j, i));
            }
        }
    }
    let mut size = vec![1usize; n];
    let mut id: Vec<usize> = (0..n).collect();
    let mut active = vec![true; n];
    let mut merges = Vec::with_capacity(n.saturating_sub(1));

    for step in 0..n.saturating_sub(1) {
        let mut best: Option<(f64, (usize, usize))> = None;
        let mut best_slots = (0, 0);
        for a in (0..n).filter(|&a| active[a]) {
            for b in (a + 1..n).filter(|&b| active[b]) {
                let value = sums[a * n + b] / (size[a] * size[b]) as f64;
                let pair = (id[a].min(id[b]), id[a].max(id[b]));
                if better(value, pair, best) {
                    best = Some((value, pair));
                    best_slots = (a, b);
                }
            }
        }
        let (height, (left, right)) = best.expect("at least two active clusters");
        let (a, b) = best_slots;
        for c in (0..n).filter(|&c| active[c] && c != a && c != b) {
            let s = sums[a * n + c] + sums[b * n + c];
            sums[a * n + c] = s;
            sums[c * n + a] = s;
        }
        active[b] = false;
        size[a] += size[b];
        id[a] = n + step;
        merges.push(Merge {
            left,
            right,
            height,
            size: size[a],
        });
    }
    Dendrogram { leaves: n, merges }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub countries: Vec<CountryCode>,
    /// Cluster id per country, aligned with `countries`.
    pub cluster_of: Vec<usize>,
    /// Members per cluster; ids ordered by size (descending) then smallest member.
    pub clusters: Vec<Vec<usize>>,
    /// Per cluster: excluded from reporting (single-country clusters after filtering).
    pub ignored: Vec<bool>,
}

impl ClusterAssignment {
    pub fn from_groups(countries: Vec<CountryCode>, mut groups: Vec<Vec<usize>>) -> Self {
        for g in &mut groups {
            g.sort_unstable();
        }
        groups.retain(|g| !g.is_empty());
        groups.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let mut cluster_of = vec![0; countries.len()];
        for (cid, g) in groups.iter().enumerate() {
            for &m in g {
                cluster_of[m] = cid;
            }
        }
        let ignored = vec![false; groups.len()];
        Self {
            countries,
            cluster_of,
            clusters: groups,
            ignored,
        }
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_assigned(&self, country: usize) -> bool {
        !self.ignored[self.cluster_of[country]]
    }

    /// `country,cluster_id,ignored`; ignored countries keep their raw id.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "country,cluster_id,ignored")?;
        for (i, c) in self.countries.iter().enumerate() {
            let cid = self.cluster_of[i];
            writeln!(out, "{c},{cid},{}", self.ignored[cid])?;
        }
        Ok(())
    }
}

impl Dendrogram {
    /// Applies the first `leaves - n_clusters` merges.
    pub fn cut(&self, countries: Vec<CountryCode>, n_clusters: usize) -> Result<ClusterAssignment> {
        let n = self.leaves;
        if n_clusters < 1 || n_clusters > n {
            return Err(Error::InvalidParameter(format!(
                "n_clusters {n_clusters} outside 1..={n}"
            )));
        }
        let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for m in &self.merges[..n - n_clusters] {
            let mut joined = std::mem::take(&mut members[m.left]);
            joined.append(&mut members[m.right]);
            members.push(joined);
        }
        Ok(ClusterAssignment::from_groups(countries, members))
    }
}

/// Average-linkage clustering cut to exactly `n_clusters` clusters.
pub fn average_linkage(dm: &DistanceMatrix, n_clusters: usize) -> Result<ClusterAssignment> {
    let n = dm.len();
    if n_clusters < 1 || n_clusters > n {
        return Err(Error::InvalidParameter(format!(
            "n_clusters {n_clusters} outside 1..={n}"
        )));
    }
    linkage(dm).cut(dm.countries.clone(), n_clusters)
}

/// Marks single-country clusters as ignored.
pub fn filter_singletons(ca: &ClusterAssignment) -> ClusterAssignment {
    let mut out = ca.clone();
    for (cid, members) in out.clusters.iter().enumerate() {
        out.ignored[cid] = members.len() == 1;
    }
    out
}

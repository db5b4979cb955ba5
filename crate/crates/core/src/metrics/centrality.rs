use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::country::CountryCode;
use crate::error::{Error, Result};
use crate::graph::Digraph;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PageRankParams {
    pub damping: f64,
    /// Iteration stops once the L1 change between iterates drops below this.
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for PageRankParams {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tolerance: 1e-9,
            max_iter: 1_000_000,
        }
    }
}

/// Weighted PageRank by power iteration.
///
/// Transitions from `i` are proportional to `w_ij`; the mass of nodes without
/// outgoing edges is spread uniformly. Values are aligned with `g.nodes()`.
pub fn pagerank(g: &Digraph, params: &PageRankParams) -> Result<Vec<f64>> {
    let PageRankParams {
        damping,
        tolerance,
        max_iter,
    } = *params;
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "damping {damping} outside (0, 1)"
        )));
    }
    let n = g.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let nf = n as f64;
    let strength: Vec<f64> = (0..n).map(|v| g.out_strength(v) as f64).collect();
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let dangling: f64 = (0..n)
            .filter(|&v| strength[v] == 0.0)
            .map(|v| rank[v])
            .sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        next.fill(base);
        for e in g.edges() {
            next[e.target] += damping * rank[e.source] * e.weight as f64 / strength[e.source];
        }
        residual = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if residual < tolerance {
            let total: f64 = rank.iter().sum();
            rank.iter_mut().for_each(|r| *r /= total);
            return Ok(rank);
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        residual,
    })
}

/// Unnormalized betweenness over unweighted directed geodesics (Brandes accumulation).
pub fn betweenness(g: &Digraph) -> Vec<f64> {
    let n = g.node_count();
    let mut score = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    for s in 0..n {
        sigma.fill(0.0);
        dist.fill(-1);
        delta.fill(0.0);
        preds.iter_mut().for_each(Vec::clear);
        order.clear();

        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, _) in g.out_edges(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    score
}

/// Competition ranking, highest value first: ties share the smaller rank and the
/// next rank skips.
pub fn competition_ranks(values: &[f64]) -> Vec<usize> {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    values
        .iter()
        .map(|v| 1 + sorted.partition_point(|s| s.total_cmp(v).is_gt()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    InDegree,
    OutDegree,
    InStrength,
    OutStrength,
    PageRank,
    Betweenness,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::InDegree,
        Measure::OutDegree,
        Measure::InStrength,
        Measure::OutStrength,
        Measure::PageRank,
        Measure::Betweenness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::InDegree => "in_degree",
            Measure::OutDegree => "out_degree",
            Measure::InStrength => "in_strength",
            Measure::OutStrength => "out_strength",
            Measure::PageRank => "pagerank",
            Measure::Betweenness => "betweenness",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralityTable {
    pub countries: Vec<CountryCode>,
    pub in_degree: Vec<usize>,
    pub out_degree: Vec<usize>,
    pub in_strength: Vec<u64>,
    pub out_strength: Vec<u64>,
    pub pagerank: Vec<f64>,
    pub betweenness: Vec<f64>,
}

pub fn centrality_table(g: &Digraph, params: &PageRankParams) -> Result<CentralityTable> {
    let n = g.node_count();
    Ok(CentralityTable {
        countries: g.nodes().to_vec(),
        in_degree: (0..n).map(|v| g.in_degree(v)).collect(),
        out_degree: (0..n).map(|v| g.out_degree(v)).collect(),
        in_strength: (0..n).map(|v| g.in_strength(v)).collect(),
        out_strength: (0..n).map(|v| g.out_strength(v)).collect(),
        pagerank: pagerank(g, params)?,
        betweenness: betweenness(g),
    })
}

impl CentralityTable {
    pub fn values(&self, measure: Measure) -> Vec<f64> {
        match measure {
            Measure::InDegree => self.in_degree.iter().map(|&d| d as f64).collect(),
            Measure::OutDegree => self.out_degree.iter().map(|&d| d as f64).collect(),
            Measure::InStrength => self.in_strength.iter().map(|&s| s as f64).collect(),
            Measure::OutStrength => self.out_strength.iter().map(|&s| s as f64).collect(),
            Measure::PageRank => self.pagerank.clone(),
            Measure::Betweenness => self.betweenness.clone(),
        }
    }

    pub fn ranks(&self, measure: Measure) -> Vec<usize> {
        competition_ranks(&self.values(measure))
    }

    /// `(rank, country, value)` rows ordered by rank, then country code.
    pub fn ranking(&self, measure: Measure) -> Vec<(usize, CountryCode, f64)> {
        let values = self.values(measure);
        let ranks = competition_ranks(&values);
        let mut rows: Vec<_> = (0..values.len())
            .map(|i| (ranks[i], self.countries[i], values[i]))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        rows
    }

    pub fn index_of(&self, country: CountryCode) -> Option<usize> {
        self.countries.binary_search(&country).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::codes;

    fn g(n: usize, edges: &[(usize, usize, u64)]) -> Digraph {
        Digraph::new(codes(n), edges.iter().copied()).unwrap()
    }

    #[test]
    fn pagerank_symmetric_pair_and_isolated_nodes() {
        let p = pagerank(&g(2, &[(0, 1, 3), (1, 0, 3)]), &PageRankParams::default()).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        let p = pagerank(&g(3, &[]), &PageRankParams::default()).unwrap();
        for v in p {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pagerank_reports_non_convergence() {
        let params = PageRankParams {
            max_iter: 1,
            ..Default::default()
        };
        let err = pagerank(&g(3, &[(0, 1, 1), (1, 2, 5)]), &params).unwrap_err();
        assert!(matches!(err, Error::NotConverged { iterations: 1, .. }));
        let bad = PageRankParams {
            damping: 1.0,
            ..Default::default()
        };
        assert!(pagerank(&g(2, &[]), &bad).is_err());
    }

    #[test]
    fn betweenness_of_path_and_complete_graph() {
        let b = betweenness(&g(3, &[(0, 1, 1), (1, 2, 1)]));
        assert_eq!(b, vec![0.0, 1.0, 0.0]);
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    edges.push((i, j, 1));
                }
            }
        }
        assert!(betweenness(&g(4, &edges)).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn ties_share_the_smaller_rank() {
        assert_eq!(competition_ranks(&[5.0, 7.0, 5.0, 1.0]), vec![2, 1, 2, 4]);
        assert_eq!(competition_ranks(&[]), Vec::<usize>::new());
    }

    #[test]
    fn table_ranking_is_sorted() {
        let t = centrality_table(
            &g(3, &[(0, 1, 4), (2, 1, 1), (1, 0, 2)]),
            &PageRankParams::default(),
        )
        .unwrap();
        let r = t.ranking(Measure::InStrength);
        assert_eq!(r[0].1.as_str(), "AB");
        assert_eq!(r[0].2, 5.0);
        assert_eq!(t.ranks(Measure::OutDegree), vec![1, 1, 1]);
    }
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;

/// The 16 isomorphism classes of directed triads, MAN-coded, in the standard order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TriadClass {
    #[serde(rename = "003")]
    T003,
    #[serde(rename = "012")]
    T012,
    #[serde(rename = "102")]
    T102,
    #[serde(rename = "021D")]
    T021D,
    #[serde(rename = "021U")]
    T021U,
    #[serde(rename = "021C")]
    T021C,
    #[serde(rename = "111D")]
    T111D,
    #[serde(rename = "111U")]
    T111U,
    #[serde(rename = "030T")]
    T030T,
    #[serde(rename = "030C")]
    T030C,
    #[serde(rename = "201")]
    T201,
    #[serde(rename = "120D")]
    T120D,
    #[serde(rename = "120U")]
    T120U,
    #[serde(rename = "120C")]
    T120C,
    #[serde(rename = "210")]
    T210,
    #[serde(rename = "300")]
    T300,
}

use TriadClass::*;

impl TriadClass {
    pub const ALL: [TriadClass; 16] = [
        T003, T012, T102, T021D, T021U, T021C, T111D, T111U, T030T, T030C, T201, T120D, T120U,
        T120C, T210, T300,
    ];

    /// The 13 classes in which all three nodes are connected.
    pub const CONNECTED: [TriadClass; 13] = [
        T021D, T021U, T021C, T111D, T111U, T030T, T030C, T201, T120D, T120U, T120C, T210, T300,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn code(self) -> &'static str {
        match self {
            T003 => "003",
            T012 => "012",
            T102 => "102",
            T021D => "021D",
            T021U => "021U",
            T021C => "021C",
            T111D => "111D",
            T111U => "111U",
            T030T => "030T",
            T030C => "030C",
            T201 => "201",
            T120D => "120D",
            T120U => "120U",
            T120C => "120C",
            T210 => "210",
            T300 => "300",
        }
    }

    /// Arrow sketch of the class, e.g. `A<-B->C, A->C` for the feed-forward loop.
    pub fn pattern(self) -> &'static str {
        match self {
            T003 => "A,B,C",
            T012 => "A->B,C",
            T102 => "A<->B,C",
            T021D => "A<-B->C",
            T021U => "A->B<-C",
            T021C => "A->B->C",
            T111D => "A<->B<-C",
            T111U => "A<->B->C",
            T030T => "A<-B->C, A->C",
            T030C => "A<-B<-C, A->C",
            T201 => "A<->B<->C",
            T120D => "A<-B->C, A<->C",
            T120U => "A->B<-C, A<->C",
            T120C => "A->B->C, A<->C",
            T210 => "A->B<->C, A<->C",
            T300 => "A<->B<->C, A<->C",
        }
    }

    pub fn is_connected(self) -> bool {
        !matches!(self, T003 | T012 | T102)
    }
}

impl fmt::Display for TriadClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for TriadClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TriadClass::ALL
            .into_iter()
            .find(|c| c.code() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown triad class `{s}`")))
    }
}

/// Class index for each 6-bit adjacency code of an ordered triple `(v, u, w)`.
/// Bits: v->u, u->v, v->w, w->v, u->w, w->u.
const TRICODE_CLASS: [u8; 64] = [
    0, 1, 1, 2, 1, 3, 5, 7, 1, 5, 4, 6, 2, 7, 6, 10, //
    1, 5, 3, 7, 4, 8, 8, 12, 5, 9, 8, 13, 6, 13, 11, 14, //
    1, 4, 5, 6, 5, 8, 9, 13, 3, 8, 8, 11, 7, 12, 13, 14, //
    2, 6, 7, 10, 6, 11, 13, 14, 7, 13, 12, 14, 10, 14, 14, 15,
];

fn tricode(g: &Digraph, v: usize, u: usize, w: usize) -> usize {
    let pairs = [(v, u), (u, v), (v, w), (w, v), (u, w), (w, u)];
    pairs
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| g.has_edge(a, b))
        .fold(0, |code, (bit, _)| code | (1 << bit))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriadCensus {
    pub counts: [u64; 16],
}

impl TriadCensus {
    pub fn get(&self, class: TriadClass) -> u64 {
        self.counts[class.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TriadClass, u64)> + '_ {
        TriadClass::ALL.into_iter().map(|c| (c, self.get(c)))
    }
}

/// Exact triad census by the subquadratic neighborhood method: only triples
/// touching at least one edge are enumerated, the empty class is the remainder.
pub fn triad_census(g: &Digraph) -> Result<TriadCensus> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::TooFewNodes {
            required: 3,
            actual: n,
        });
    }
    let neighbors: Vec<Vec<usize>> = (0..n).map(|v| g.undirected_neighbors(v)).collect();
    let mut counts = [0u64; 16];
    let mut in_s = vec![false; n];
    let mut s: Vec<usize> = Vec::new();

    for v in 0..n {
        for &u in neighbors[v].iter().filter(|&&u| u > v) {
            s.clear();
            for &w in neighbors[u].iter().chain(&neighbors[v]) {
                if w != u && w != v && !in_s[w] {
                    in_s[w] = true;
                    s.push(w);
                }
            }
            let dyad = if g.has_edge(v, u) && g.has_edge(u, v) {
                T102
            } else {
                T012
            };
            counts[dyad.index()] += (n - s.len() - 2) as u64;
            for &w in &s {
                let v_adj_w = neighbors[v].binary_search(&w).is_ok();
                if u < w || (v < w && w < u && !v_adj_w) {
                    counts[TRICODE_CLASS[tricode(g, v, u, w)] as usize] += 1;
                }
            }
            for &w in &s {
                in_s[w] = false;
            }
        }
    }
    let n = n as u64;
    let all = n * (n - 1) * (n - 2) / 6;
    counts[T003.index()] = all - counts[1..].iter().sum::<u64>();
    Ok(TriadCensus { counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::codes;

    fn g(n: usize, edges: &[(usize, usize)]) -> Digraph {
        Digraph::new(codes(n), edges.iter().map(|&(a, b)| (a, b, 1))).unwrap()
    }

    #[test]
    fn empty_triad() {
        let c = triad_census(&g(3, &[])).unwrap();
        assert_eq!(c.get(T003), 1);
        assert_eq!(c.total(), 1);
    }

    #[test]
    fn complete_triad() {
        let c = triad_census(&g(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)])).unwrap();
        assert_eq!(c.get(T300), 1);
        assert_eq!(c.total(), 1);
    }

    #[test]
    fn named_small_triads() {
        let one = |edges: &[(usize, usize)]| {
            let c = triad_census(&g(3, edges)).unwrap();
            let class = c.iter().find(|&(_, k)| k == 1).unwrap().0;
            class
        };
        assert_eq!(one(&[(1, 0), (1, 2)]), T021D);
        assert_eq!(one(&[(0, 1), (2, 1)]), T021U);
        assert_eq!(one(&[(0, 1), (1, 2)]), T021C);
        assert_eq!(one(&[(1, 0), (1, 2), (0, 2)]), T030T);
        assert_eq!(one(&[(0, 1), (1, 2), (2, 0)]), T030C);
        assert_eq!(one(&[(0, 1), (1, 0), (2, 1)]), T111D);
        assert_eq!(one(&[(0, 1), (1, 0), (1, 2)]), T111U);
    }

    #[test]
    fn needs_three_nodes() {
        assert!(triad_census(&g(2, &[(0, 1)])).is_err());
    }

    #[test]
    fn class_codes_round_trip() {
        for c in TriadClass::ALL {
            assert_eq!(c.code().parse::<TriadClass>().unwrap(), c);
        }
        assert_eq!(TriadClass::CONNECTED.len(), 13);
        assert!(TriadClass::CONNECTED.iter().all(|c| c.is_connected()));
    }
}

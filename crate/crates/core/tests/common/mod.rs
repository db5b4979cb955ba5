//! Independent reference implementations used as test oracles. They favour
//! obviousness over speed and share no code with the library algorithms.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use tourflow::census::TriadClass;
use tourflow::Digraph;

pub fn adjacency(g: &Digraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for e in g.edges() {
        a[e.source][e.target] = true;
    }
    a
}

pub fn weights(g: &Digraph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut w = vec![vec![0.0; n]; n];
    for e in g.edges() {
        w[e.source][e.target] = e.weight as f64;
    }
    w
}

/// All-pairs hop distances by Floyd-Warshall; `None` when unreachable.
pub fn floyd_warshall(g: &Digraph) -> Vec<Vec<Option<u64>>> {
    let n = g.node_count();
    let a = adjacency(g);
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for j in 0..n {
            if a[i][j] {
                d[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].map_or(true, |c| x + y < c) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}

/// Classifies the triad on `{x, y, z}` from its dyad types and edge layout.
pub fn classify_triad(a: &[Vec<bool>], x: usize, y: usize, z: usize) -> TriadClass {
    use TriadClass::*;
    let nodes = [x, y, z];
    let pairs = [(x, y), (x, z), (y, z)];
    let mutual: Vec<(usize, usize)> = pairs
        .iter()
        .copied()
        .filter(|&(p, q)| a[p][q] && a[q][p])
        .collect();
    // asymmetric edges as (from, to)
    let asym: Vec<(usize, usize)> = pairs
        .iter()
        .filter_map(|&(p, q)| match (a[p][q], a[q][p]) {
            (true, false) => Some((p, q)),
            (false, true) => Some((q, p)),
            _ => None,
        })
        .collect();
    let outs = |v: usize| asym.iter().filter(|e| e.0 == v).count();
    let ins = |v: usize| asym.iter().filter(|e| e.1 == v).count();
    match (mutual.len(), asym.len()) {
        (0, 0) => T003,
        (0, 1) => T012,
        (1, 0) => T102,
        (0, 2) => {
            if nodes.iter().any(|&v| outs(v) == 2) {
                T021D
            } else if nodes.iter().any(|&v| ins(v) == 2) {
                T021U
            } else {
                T021C
            }
        }
        (1, 1) => {
            // does the single asymmetric edge point into the mutual pair?
            let (p, q) = mutual[0];
            let (_, to) = asym[0];
            if to == p || to == q {
                T111D
            } else {
                T111U
            }
        }
        (0, 3) => {
            if nodes.iter().all(|&v| outs(v) == 1) {
                T030C
            } else {
                T030T
            }
        }
        (2, 0) => T201,
        (1, 2) => {
            let (p, q) = mutual[0];
            let third = nodes.into_iter().find(|&v| v != p && v != q).unwrap();
            match outs(third) {
                2 => T120D,
                0 => T120U,
                _ => T120C,
            }
        }
        (2, 1) => T210,
        (3, 0) => T300,
        other => unreachable!("impossible dyad mix {other:?}"),
    }
}

/// Triad census by enumerating every unordered triple.
pub fn brute_census(g: &Digraph) -> [u64; 16] {
    let n = g.node_count();
    let a = adjacency(g);
    let mut c = [0u64; 16];
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                c[classify_triad(&a, x, y, z).index()] += 1;
            }
        }
    }
    c
}

/// Betweenness by enumerating every shortest path explicitly.
pub fn exhaustive_betweenness(g: &Digraph) -> Vec<f64> {
    let n = g.node_count();
    let a = adjacency(g);
    let d = floyd_warshall(g);
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            let Some(len) = d[s][t] else { continue };
            if s == t {
                continue;
            }
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if path.len() as u64 == len + 1 {
                    if last == t {
                        paths.push(path);
                    }
                    continue;
                }
                for next in 0..n {
                    if a[last][next] {
                        let mut p = path.clone();
                        p.push(next);
                        stack.push(p);
                    }
                }
            }
            let total = paths.len() as f64;
            for v in 0..n {
                if v != s && v != t {
                    let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                    bc[v] += through / total;
                }
            }
        }
    }
    bc
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Stationary PageRank vector as the solution of the dense linear system
/// `(I - d M) x = (1 - d)/n`, where `M` includes uniform dangling redistribution.
pub fn dense_pagerank(g: &Digraph, damping: f64) -> Vec<f64> {
    let n = g.node_count();
    let w = weights(g);
    let mut m = vec![vec![0.0; n]; n]; // m[j][i]: probability i -> j
    for i in 0..n {
        let out: f64 = w[i].iter().sum();
        for j in 0..n {
            m[j][i] = if out > 0.0 {
                w[i][j] / out
            } else {
                1.0 / n as f64
            };
        }
    }
    let a: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| if r == c { 1.0 } else { 0.0 } - damping * m[r][c])
                .collect()
        })
        .collect();
    solve(a, vec![(1.0 - damping) / n as f64; n])
}

/// Kosaraju: finishing order on `g`, then sweeps on the transpose.
pub fn kosaraju(g: &Digraph) -> BTreeSet<BTreeSet<usize>> {
    let n = g.node_count();
    let a = adjacency(g);
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    fn visit(v: usize, a: &[Vec<bool>], seen: &mut [bool], order: &mut Vec<usize>) {
        seen[v] = true;
        for u in 0..a.len() {
            if a[v][u] && !seen[u] {
                visit(u, a, seen, order);
            }
        }
        order.push(v);
    }
    for v in 0..n {
        if !seen[v] {
            visit(v, &a, &mut seen, &mut order);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut out = BTreeSet::new();
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let mut members = BTreeSet::new();
        let mut queue = VecDeque::from([root]);
        comp[root] = root;
        while let Some(v) = queue.pop_front() {
            members.insert(v);
            for u in 0..n {
                if a[u][v] && comp[u] == usize::MAX {
                    comp[u] = root;
                    queue.push_back(u);
                }
            }
        }
        out.insert(members);
    }
    out
}

/// One naive agglomeration step record: (left id, right id, height, size).
pub type NaiveMerge = (usize, usize, f64, usize);

/// Average linkage recomputing every cluster-pair mean from scratch each
/// step. Ties within a relative 1e-12 go to the smallest (id, id) pair.
pub fn naive_average_linkage(d: &[Vec<f64>]) -> Vec<NaiveMerge> {
    let n = d.len();
    let sym = |i: usize, j: usize| 0.5 * (d[i][j] + d[j][i]);
    let mut clusters: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    let mut merges = Vec::new();
    for step in 0..n.saturating_sub(1) {
        let mut best: Option<(f64, (usize, usize), (usize, usize))> = None;
        for x in 0..clusters.len() {
            for y in x + 1..clusters.len() {
                let (ref cx, ref cy) = (&clusters[x].1, &clusters[y].1);
                let mut total = 0.0;
                for &i in cx.iter() {
                    for &j in cy.iter() {
                        total += sym(i, j);
                    }
                }
                let mean = total / (cx.len() * cy.len()) as f64;
                let (ix, iy) = (clusters[x].0, clusters[y].0);
                let pair = (ix.min(iy), ix.max(iy));
                let take = match best {
                    None => true,
                    Some((bv, bp, _)) => {
                        let eps = 1e-12 * bv.abs().max(1.0);
                        mean < bv - eps || ((mean - bv).abs() <= eps && pair < bp)
                    }
                };
                if take {
                    best = Some((mean, pair, (x, y)));
                }
            }
        }
        let (height, (l, r), (x, y)) = best.unwrap();
        let right = clusters.remove(y);
        let left = clusters.remove(x);
        let mut members = left.1;
        members.extend(right.1);
        let size = members.len();
        clusters.push((n + step, members));
        merges.push((l, r, height, size));
    }
    merges
}

/// Population mean and variance, two-pass.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n)
}

/// Pearson correlation from textbook sums, centered twice for accuracy.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let (mx, vx) = mean_var(x);
    let (my, vy) = mean_var(y);
    let cov = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - mx) * (b - my))
        .sum::<f64>()
        / x.len() as f64;
    cov / (vx.sqrt() * vy.sqrt())
}

pub fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

pub fn choose3(n: u64) -> u64 {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

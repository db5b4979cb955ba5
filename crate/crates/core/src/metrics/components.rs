use serde::{Deserialize, Serialize};

use crate::country::CountryCode;
use crate::graph::Digraph;

/// Strongly connected components. Component 0 is the largest; equal sizes are
/// ordered by their smallest member code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentAssignment {
    pub countries: Vec<CountryCode>,
    /// Component id per node, aligned with `countries`.
    pub component_of: Vec<usize>,
    /// Members (node indices, ascending) per component id.
    pub components: Vec<Vec<usize>>,
}

impl ComponentAssignment {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Components with more than one member.
    pub fn non_trivial(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .map(|(i, c)| (i, c.as_slice()))
    }
}

/// Tarjan's single-pass SCC search with Nuutila's refinement: only nodes that
/// are not component roots go on the component stack. Iterative.
pub fn scc(g: &Digraph) -> ComponentAssignment {
    const UNVISITED: usize = usize::MAX;
    let n = g.node_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut done = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut found: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        call.push((root, 0));

        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            let out = g.out_edges(v);
            if frame.1 < out.len() {
                let w = out[frame.1].0;
                frame.1 += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    call.push((w, 0));
                } else if !done[w] {
                    low[v] = low[v].min(low[w]);
                }
                continue;
            }
            call.pop();
            if low[v] == index[v] {
                let mut members = vec![v];
                while let Some(&top) = stack.last() {
                    if index[top] <= index[v] {
                        break;
                    }
                    members.push(top);
                    stack.pop();
                }
                for &m in &members {
                    done[m] = true;
                }
                members.sort_unstable();
                found.push(members);
            } else {
                stack.push(v);
            }
            if let Some(&(parent, _)) = call.last() {
                if !done[v] {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }

    found.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut component_of = vec![0; n];
    for (id, members) in found.iter().enumerate() {
        for &m in members {
            component_of[m] = id;
        }
    }
    ComponentAssignment {
        countries: g.nodes().to_vec(),
        component_of,
        components: found,
    }
}

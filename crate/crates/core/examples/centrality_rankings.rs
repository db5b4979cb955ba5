//! Degree, strength, PageRank and betweenness rankings on a Top-3 Out subgraph.

use tourflow::metrics::{centrality_table, Measure, PageRankParams};
use tourflow::synthetic::World;
use tourflow::topk_out;

fn main() -> tourflow::Result<()> {
    let g = World::generate(30, 4, 3).flow_graph("world", 5000.0, 0.3, 4);
    let sg = topk_out(&g, 3)?;
    let table = centrality_table(&sg, &PageRankParams::default())?;
    for m in Measure::ALL {
        let top: Vec<String> = table
            .ranking(m)
            .into_iter()
            .take(5)
            .map(|(rank, c, v)| format!("{rank}. {c} ({v:.4})"))
            .collect();
        println!("{:<13} {}", m.name(), top.join("  "));
    }
    Ok(())
}

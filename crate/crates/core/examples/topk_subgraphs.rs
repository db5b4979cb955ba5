//! Top-k In and Out subgraph extraction with deterministic tie-breaking.

use tourflow::synthetic::World;
use tourflow::{topk_in, topk_out};

fn main() -> tourflow::Result<()> {
    let g = World::generate(12, 3, 5).flow_graph("world", 1000.0, 0.2, 6);
    println!(
        "base graph: {} nodes, {} edges",
        g.node_count(),
        g.edge_count()
    );

    for k in 1..=3 {
        let out = topk_out(&g, k)?;
        let inn = topk_in(&g, k)?;
        println!(
            "k={k}: out edges {}, in edges {}",
            out.edge_count(),
            inn.edge_count()
        );
    }

    let sg = topk_out(&g, 1)?;
    println!("strongest outgoing flow per country:");
    for (a, b, w) in sg.coded_edges() {
        println!("  {a} -> {b} ({w})");
    }
    Ok(())
}

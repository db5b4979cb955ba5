//! DOT, GraphML and edge-list CSV serialization of a Top-1 Out subgraph.

use std::io::Write;

use tourflow::export::{export_graph, ExportFormat};
use tourflow::synthetic::World;
use tourflow::topk_out;

fn main() -> tourflow::Result<()> {
    let g = World::generate(6, 2, 70).flow_graph("world", 100.0, 0.0, 0);
    let sg = topk_out(&g, 1)?;
    let mut out = std::io::stdout().lock();
    for format in [
        ExportFormat::Dot,
        ExportFormat::GraphMl,
        ExportFormat::EdgeCsv,
    ] {
        writeln!(out, "== {format}")?;
        export_graph(&sg, "world_out1", format, &[], &mut out)?;
    }
    Ok(())
}

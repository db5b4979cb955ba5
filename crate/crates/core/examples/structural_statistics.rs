//! Structural statistics of the six Top-k subgraphs of a synthetic world.

use tourflow::metrics::structural_report;
use tourflow::synthetic::World;
use tourflow::{topk, Direction};

fn main() -> tourflow::Result<()> {
    let g = World::generate(60, 6, 1).flow_graph("world", 10_000.0, 0.4, 2);
    println!("graph  edges  density  geodesic  diam  cent    recip   trans");
    for k in 1..=3 {
        for dir in [Direction::In, Direction::Out] {
            let sg = topk(&g, k, dir)?;
            let r = structural_report(&sg)?;
            println!(
                "{:<6} {:>5}  {:.4}   {:>8.3}  {:>4}  {:.4}  {:.4}  {:.4}",
                sg.tag(),
                r.edge_count,
                r.density,
                r.avg_geodesic.unwrap_or(f64::NAN),
                r.diameter.map_or("-".into(), |d| d.to_string()),
                r.degree_centralization.map_or(f64::NAN, |c| c.value),
                r.reciprocity,
                r.transitivity
            );
            println!(
                "       dyads M/A/N = {}/{}/{}, unreachable pairs {}",
                r.dyads.mutual, r.dyads.asymmetric, r.dyads.null, r.unreachable_pairs
            );
        }
    }
    Ok(())
}

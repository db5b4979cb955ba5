//! Per-country correlation of feature-space distances between two datasets.

use tourflow::compare::{avg_distance_matrix, country_correlations, feature_matrix};
use tourflow::metrics::{centrality_table, scc, PageRankParams};
use tourflow::synthetic::World;
use tourflow::{topk, Direction, MobilityGraph};

fn distances(g: &MobilityGraph) -> tourflow::Result<tourflow::compare::CountryMatrix> {
    let mut fms = Vec::new();
    for k in 1..=3 {
        for dir in [Direction::In, Direction::Out] {
            let sg = topk(g, k, dir)?;
            let t = centrality_table(&sg, &PageRankParams::default())?;
            fms.push(feature_matrix(&sg, &t, &scc(&sg))?);
        }
    }
    avg_distance_matrix(&fms)
}

fn main() -> tourflow::Result<()> {
    let world = World::generate(30, 5, 50);
    let lbsn = world.flow_graph("lbsn", 2000.0, 0.8, 51);
    let official = world.flow_graph("official", 80_000.0, 0.2, 52);

    let report = country_correlations(&distances(&lbsn)?, &distances(&official)?)?;
    let mut rows: Vec<_> = report
        .entries
        .iter()
        .filter_map(|e| e.rho.map(|r| (r, e.country)))
        .collect();
    rows.sort_by(|a, b| b.0.total_cmp(&a.0));
    println!("{} common countries", report.common_countries);
    for (rho, c) in rows.iter().take(5) {
        println!("  {c}: rho = {rho:.3}");
    }
    println!("  ...");
    for (rho, c) in rows.iter().rev().take(3) {
        println!("  {c}: rho = {rho:.3}");
    }
    Ok(())
}

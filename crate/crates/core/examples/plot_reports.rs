//! Renders a share-difference heatmap and a z-score bar chart to SVG files.
//!
//! `cargo run --example plot_reports -- /tmp/plots`

use std::fs;
use std::path::PathBuf;

use tourflow::census::motif_zscores;
use tourflow::plot::{plot, PlotKind};
use tourflow::regional::{regional_flows, share_diff, to_shares};
use tourflow::report::write_zscores_csv;
use tourflow::synthetic::World;
use tourflow::topk_out;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "plots".into()));
    fs::create_dir_all(&dir)?;
    let world = World::generate(36, 6, 90);
    let a = topk_out(&world.flow_graph("a", 5000.0, 0.6, 91), 3)?;
    let b = topk_out(&world.flow_graph("b", 5000.0, 0.6, 92), 3)?;

    let rm = world.region_map();
    let diff = share_diff(
        &to_shares(&regional_flows(&a, &rm)?)?,
        &to_shares(&regional_flows(&b, &rm)?)?,
    )?;
    let mut csv = Vec::new();
    diff.write_csv(&mut csv)?;
    fs::write(
        dir.join("share_diff.svg"),
        plot(csv.as_slice(), PlotKind::Heatmap, 0, &[])?,
    )?;

    let mut csv = Vec::new();
    write_zscores_csv(&motif_zscores(&a, 100, 1, 100)?, &mut csv)?;
    fs::write(
        dir.join("zscores.svg"),
        plot(csv.as_slice(), PlotKind::Bar, 0, &[])?,
    )?;

    println!("wrote {}/share_diff.svg and zscores.svg", dir.display());
    Ok(())
}

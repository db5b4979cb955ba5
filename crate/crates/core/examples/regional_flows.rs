//! Continent-level share matrices and their percentage-point differences.

use tourflow::regional::{regional_flows, share_diff, to_shares};
use tourflow::synthetic::World;
use tourflow::topk_in;

fn main() -> tourflow::Result<()> {
    let world = World::generate(36, 6, 30);
    let regions = world.region_map();
    let a = topk_in(&world.flow_graph("a", 5000.0, 0.6, 31), 3)?;
    let b = topk_in(&world.flow_graph("b", 5000.0, 0.6, 32), 3)?;

    let raw = regional_flows(&a, &regions)?;
    println!(
        "raw total {} = subgraph weight {}",
        raw.total(),
        a.total_weight()
    );
    let sa = to_shares(&raw)?;
    let sb = to_shares(&regional_flows(&b, &regions)?)?;
    let diff = share_diff(&sa, &sb)?;

    let mut out = std::io::stdout().lock();
    diff.write_csv(&mut out)?;
    println!("mean |diff| = {:.3} pp", diff.mean_abs());
    if let Some(m) = diff.mean_abs_non_null() {
        println!("mean |diff| over non-null cells = {m:.3} pp");
    }
    Ok(())
}

//! Triad census and motif z-scores against a degree-preserving null model.

use tourflow::census::{motif_zscores, triad_census};
use tourflow::synthetic::World;
use tourflow::topk_out;

fn main() -> tourflow::Result<()> {
    let g = World::generate(40, 5, 21).flow_graph("world", 5000.0, 0.5, 22);
    let sg = topk_out(&g, 3)?;

    let census = triad_census(&sg)?;
    println!("triads: {} (all classes)", census.total());

    let z = motif_zscores(&sg, 200, 42, 100)?;
    println!("class  pattern               real    mean      z");
    for s in &z.scores {
        println!(
            "{:<6} {:<20} {:>5} {:>7.2} {:>7}",
            s.class.code(),
            s.class.pattern(),
            s.real_count,
            s.null_mean,
            s.z.map_or("-".into(), |z| format!("{z:.2}"))
        );
    }
    if let Some(best) = z.argmax() {
        println!("most over-represented: {best} ({})", best.pattern());
    }
    Ok(())
}

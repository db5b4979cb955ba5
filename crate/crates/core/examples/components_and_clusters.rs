//! Strongly connected components and average-linkage clusters of a Top-2 In subgraph.

use tourflow::clustering::{average_linkage, distance_matrix, filter_singletons};
use tourflow::metrics::scc;
use tourflow::synthetic::World;
use tourflow::topk_in;

fn main() -> tourflow::Result<()> {
    let world = World::generate(24, 4, 8);
    let g = world.flow_graph("world", 5000.0, 0.3, 9);
    let sg = topk_in(&g, 2)?;

    let comps = scc(&sg);
    println!("{} strongly connected components", comps.component_count());
    for (id, members) in comps.non_trivial() {
        let names: Vec<&str> = members
            .iter()
            .map(|&i| comps.countries[i].as_str())
            .collect();
        println!("  component {id}: {}", names.join(" "));
    }

    let dm = distance_matrix(&sg);
    let clusters = filter_singletons(&average_linkage(&dm, 6)?);
    for (id, members) in clusters.clusters.iter().enumerate() {
        let names: Vec<String> = members
            .iter()
            .map(|&i| {
                let c = clusters.countries[i];
                format!("{c}(r{})", world.region_of[i] + 1)
            })
            .collect();
        let note = if clusters.ignored[id] {
            " [ignored]"
        } else {
            ""
        };
        println!("cluster {id}{note}: {}", names.join(" "));
    }
    Ok(())
}

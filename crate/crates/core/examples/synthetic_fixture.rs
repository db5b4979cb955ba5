//! Writes a synthetic two-dataset fixture plus a config file for the CLI.
//!
//! ```text
//! cargo run --example synthetic_fixture -- /tmp/tf
//! cargo run --bin tourflow -- --config /tmp/tf/tourflow.conf build
//! cargo run --release --bin tourflow -- --config /tmp/tf/tourflow.conf analyze
//! ```

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use tourflow::ingest::write_flow_matrix;
use tourflow::synthetic::World;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixture".into()));
    fs::create_dir_all(&dir)?;

    let world = World::generate(40, 5, 11);

    let mut checkins = fs::File::create(dir.join("checkins.csv"))?;
    writeln!(checkins, "user_id,country,timestamp,venue_id")?;
    for r in world.checkins(3000, 5, 4, 12) {
        writeln!(
            checkins,
            "{},{},{},{}",
            r.user_id,
            r.country,
            r.timestamp.format("%Y-%m-%dT%H:%M:%SZ"),
            r.venue_id.unwrap_or_default()
        )?;
    }

    let official = world.flow_graph("official", 5000.0, 0.3, 13);
    write_flow_matrix(
        &official,
        &["synthetic official flows".into()],
        fs::File::create(dir.join("flows.csv"))?,
    )?;

    let mut regions = fs::File::create(dir.join("regions.csv"))?;
    writeln!(regions, "country,region")?;
    for (c, r) in world.countries.iter().zip(&world.region_of) {
        writeln!(regions, "{c},{}", world.regions[*r])?;
    }

    fs::write(
        dir.join("tourflow.conf"),
        "\
dataset.a.checkins = checkins.csv
dataset.a.label = checkins
dataset.b.flows = flows.csv
dataset.b.label = official
checkin_threshold = 20
region_map = regions.csv
ensemble.size = 200
n_clusters = 6
seed = 7
output_dir = out
",
    )?;
    println!("fixture written to {}", dir.display());
    Ok(())
}

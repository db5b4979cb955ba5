//! Check-in log to country flow graph: homes, threshold, distinct-user weights.

use tourflow::ingest::{
    build_mobility_graph, filter_countries, infer_homes, parse_checkins, InputFormat, ParseMode,
};

const LOG: &str = "\
user_id,country,timestamp,venue_id
alice,IT,2014-04-02T10:00:00Z,v1
alice,IT,2014-04-03T10:00:00Z,v2
alice,FR,2014-05-01 08:30:00,v3
alice,FR,2014-05-02 09:00:00,v4
bob,FR,1396951200,v5
bob,FR,1397037600,v6
bob,FR,1397124000,v7
bob,IT,1397210400,v8
bob,ES,1397296800,v9
carol,ES,2014-06-01T12:00:00Z,
carol,ES,2014-06-02T12:00:00Z,
carol,IT,2014-06-03T12:00:00Z,
";

fn main() -> tourflow::Result<()> {
    let table = parse_checkins(LOG.as_bytes(), InputFormat::Csv, ParseMode::Strict)?;
    println!(
        "{} check-ins from {} users",
        table.len(),
        table.user_counts().len()
    );

    // alice ties IT/FR 2:2, the smaller code wins
    let homes = infer_homes(&table);
    for (user, home) in &homes {
        println!("home({user}) = {home}");
    }

    // strictly more than 2 check-ins keeps all three countries
    let allowed = filter_countries(&table, 2);
    let g = build_mobility_graph(&table, &homes, &allowed, "demo")?;
    println!("{} nodes, {} edges", g.node_count(), g.edge_count());
    for (from, to, users) in g.coded_edges() {
        println!("  {from} -> {to}: {users} user(s)");
    }
    Ok(())
}

//! Routing zones and the bordercast overlay of a five-node line.
//!
//! ```bash
//! cargo run -p zrp-evo --example zone_table
//! ```

use zrp_evo::experiment::oracle_shortest;
use zrp_evo::topology::{load_network, NodeId};
use zrp_evo::zrp::{build_overlay, build_zone_table, ZoneParams};

fn main() {
    let net = load_network("5\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n").unwrap();
    let zones = build_zone_table(&net, ZoneParams::new(2).unwrap());

    for zone in zones.zones() {
        let members: Vec<String> = zone.members().map(|v| format!("{v}@{}", zone.hop_of(v).unwrap())).collect();
        let peripheral: Vec<String> = zone.peripheral().iter().map(ToString::to_string).collect();
        println!("zone {}: members [{}] peripheral [{}]", zone.center(), members.join(" "), peripheral.join(" "));
    }

    let destination = NodeId(4);
    let overlay = build_overlay(&zones, destination);
    println!("\noverlay towards {destination}:");
    for arc in overlay.arcs() {
        let path = &zones.zone(arc.from).segment(arc.to).unwrap().path;
        let hops: Vec<String> = path.iter().map(ToString::to_string).collect();
        println!("  {} -> {}  weight {}  via {}", arc.from, arc.to, arc.weight, hops.join("-"));
    }

    let (cost, route) = oracle_shortest(&overlay, NodeId(0), destination).unwrap();
    println!("\nshortest overlay route {route} with cost {cost}");
}

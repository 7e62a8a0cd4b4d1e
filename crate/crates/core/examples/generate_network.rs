//! Generate a random geometric network and print a few statistics.
//!
//! ```bash
//! cargo run -p zrp-evo --example generate_network -- [n] [avg_degree] [seed]
//! ```

use zrp_evo::topology::{generate_random_network, TopologyParams};

fn main() {
    let mut args = std::env::args().skip(1);
    let params = TopologyParams {
        n: args.next().and_then(|a| a.parse().ok()).unwrap_or(100),
        target_avg_degree: args.next().and_then(|a| a.parse().ok()).unwrap_or(8.0),
        seed: args.next().and_then(|a| a.parse().ok()).unwrap_or(7),
        ..Default::default()
    };
    let net = generate_random_network(&params).expect("valid parameters");

    let components = net.components();
    let largest = components.iter().map(Vec::len).max().unwrap_or(0);
    println!("nodes            {}", net.node_count());
    println!("edges            {}", net.edges().len());
    println!("radio range      {:.4}", params.radio_range());
    println!("average degree   {:.2} (target {})", net.average_degree(), params.target_avg_degree);
    println!("components       {} (largest {largest})", components.len());

    let listing = net.to_edge_list();
    let preview: Vec<&str> = listing.lines().take(6).collect();
    println!("\nedge list head:\n{}", preview.join("\n"));
}

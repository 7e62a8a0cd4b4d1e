//! Route discovery with the genetic algorithm on a random network.
//!
//! ```bash
//! cargo run -p zrp-evo --example ga_route_discovery -- [n] [seed]
//! ```

use zrp_evo::experiment::{EndpointPolicy, EngineConfig, Instance, TopologySource};
use zrp_evo::ga::GaParams;
use zrp_evo::routes::decode_physical_path;
use zrp_evo::topology::TopologyParams;
use zrp_evo::zrp::ZoneParams;

fn main() {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|a| a.parse().ok()).unwrap_or(200);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);

    let topology = TopologySource::Generate(TopologyParams { n, seed, ..Default::default() });
    let instance = Instance::prepare(&topology, ZoneParams::default(), EndpointPolicy::RandomConnected, seed, None)
        .expect("instance");
    println!(
        "{} nodes, {} overlay arcs, route {} -> {}",
        n,
        instance.overlay.arc_count(),
        instance.source,
        instance.destination
    );

    let engine = EngineConfig::Ga(GaParams { seed, ..Default::default() });
    let result = instance.run(&engine).expect("valid parameters");
    let run = &result.run;

    for (g, best) in run.best_per_gen.iter().enumerate() {
        if g % 10 == 0 || g + 1 == run.best_per_gen.len() {
            println!("generation {g:>4}  best {best:>6}  average {:>10.1}", run.avg_per_gen[g]);
        }
    }
    println!("\nbest route     {} (fitness {})", run.best_route, run.best_fitness);
    match &instance.oracle {
        Some((cost, route)) => println!("oracle route   {route} (cost {cost}), gap {}", result.oracle_gap.unwrap()),
        None => println!("destination unreachable on the overlay"),
    }
    if let Some(path) = decode_physical_path(&run.best_route, &instance.zones) {
        let hops: Vec<String> = path.iter().map(ToString::to_string).collect();
        println!("physical path  {}", hops.join("-"));
    }
    match run.converged_at {
        Some(g) => {
            println!("best fitness unchanged since generation {g}; stopped after {} generations", run.generations_used)
        }
        None => println!("hit the generation cap without converging"),
    }
}

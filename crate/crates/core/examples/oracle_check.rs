//! How often does each engine find the exact overlay optimum on small random
//! networks?
//!
//! ```bash
//! cargo run -p zrp-evo --example oracle_check -- [instances] [runs]
//! ```

use std::sync::Arc;

use zrp_evo::eda::EdaVariant;
use zrp_evo::experiment::{EndpointPolicy, EngineConfig, Instance, TopologySource};
use zrp_evo::topology::{generate_random_network, TopologyParams};
use zrp_evo::zrp::ZoneParams;

fn main() {
    let mut args = std::env::args().skip(1);
    let instances: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(30);
    let runs: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(50);

    let prepared: Vec<Instance> = (0..instances as u64)
        .map(|i| {
            let params = TopologyParams { n: 30, target_avg_degree: 4.0, seed: 1000 + i, ..Default::default() };
            let net = Arc::new(generate_random_network(&params).expect("valid params"));
            Instance::prepare(
                &TopologySource::Loaded(net),
                ZoneParams::default(),
                EndpointPolicy::RandomConnected,
                i,
                None,
            )
            .expect("30-node graphs with degree 4 have a connected pair")
        })
        .collect();

    let engines = [EngineConfig::ga(), EngineConfig::eda(EdaVariant::Umda), EngineConfig::eda(EdaVariant::Gaussian)];
    for engine in &engines {
        let mut hits = 0;
        let mut generations = 0;
        for k in 0..runs {
            let inst = &prepared[k % instances];
            let result = inst.run(&engine.with_seed(k as u64)).expect("valid run");
            generations += result.run.generations_used;
            if result.oracle_gap == Some(0.0) {
                hits += 1;
            }
        }
        println!(
            "{:<10} optimum found in {hits}/{runs} runs ({:.1}%), mean generations {:.1}",
            engine.tag(),
            100.0 * hits as f64 / runs as f64,
            generations as f64 / runs as f64
        );
    }
}

//! The continuous EDA: a normal model over node indices per position.
//!
//! ```bash
//! cargo run -p zrp-evo --example eda_gaussian
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zrp_evo::eda::{estimate_gaussian, sample_gaussian, EdaParams, EdaVariant, StdEstimator};
use zrp_evo::experiment::{EndpointPolicy, EngineConfig, Instance, TopologySource};
use zrp_evo::routes::Route;
use zrp_evo::topology::{NodeId, TopologyParams};
use zrp_evo::zrp::{BordercastOverlay, ZoneParams};

fn route(genes: &[usize]) -> Route {
    Route::new(genes.iter().copied().map(NodeId).collect()).unwrap()
}

fn main() {
    let selected = [route(&[0, 2, 5]), route(&[0, 2, 5]), route(&[0, 3, 5]), route(&[0, 2, 5])];
    for estimator in [StdEstimator::Population, StdEstimator::Sample] {
        let model = estimate_gaussian(&selected, estimator);
        let p = model.positions[0];
        println!(
            "{estimator:?}: position 1 mean {} std {:.8}; length mean {} std {}",
            p.mean, p.std, model.length_mean, model.length_std
        );
    }

    let model = estimate_gaussian(&selected, StdEstimator::Population);
    let overlay = BordercastOverlay::from_arcs(6, NodeId(5), []);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let draws: Vec<String> =
        (0..8).map(|_| sample_gaussian(&model, &overlay, NodeId(0), NodeId(5), &mut rng, 6).to_string()).collect();
    println!("samples: {}", draws.join("  "));

    let instance = Instance::prepare(
        &TopologySource::Generate(TopologyParams { n: 150, seed: 2, ..Default::default() }),
        ZoneParams::default(),
        EndpointPolicy::RandomConnected,
        2,
        None,
    )
    .unwrap();
    for estimator in [StdEstimator::Population, StdEstimator::Sample] {
        let engine = EngineConfig::Eda(EdaParams {
            variant: EdaVariant::Gaussian,
            std_estimator: estimator,
            seed: 2,
            ..Default::default()
        });
        let result = instance.run(&engine).unwrap();
        println!(
            "150 nodes, {estimator:?} std: best {} (oracle gap {:?}) after {} generations",
            result.run.best_fitness, result.oracle_gap, result.run.generations_used
        );
    }
}

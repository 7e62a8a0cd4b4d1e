//! The discrete EDA: estimate per-position marginals from a selection, sample
//! from them, then run the full engine.
//!
//! ```bash
//! cargo run -p zrp-evo --example eda_umda
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zrp_evo::eda::{estimate_umda, run_eda, sample_umda, EdaParams, EdaVariant};
use zrp_evo::experiment::{EndpointPolicy, Instance, TopologySource};
use zrp_evo::routes::Route;
use zrp_evo::topology::{NodeId, TopologyParams};
use zrp_evo::zrp::ZoneParams;

fn route(genes: &[usize]) -> Route {
    Route::new(genes.iter().copied().map(NodeId).collect()).unwrap()
}

fn main() {
    let selected = [route(&[0, 2, 7, 9]), route(&[0, 2, 9]), route(&[0, 3, 7, 9]), route(&[0, 2, 6, 9])];
    let model = estimate_umda(&selected);
    println!("length marginal:");
    for (len, p) in model.length_marginal().probabilities() {
        println!("  P(L = {len}) = {p}");
    }
    for i in 1..=model.depth() {
        let m = model.position(i).unwrap();
        let parts: Vec<String> = m.probabilities().map(|(v, p)| format!("P({v}) = {p}")).collect();
        println!("position {i} (from {} routes): {}", m.total(), parts.join(", "));
    }

    let instance = Instance::prepare(
        &TopologySource::Generate(TopologyParams { n: 10, target_avg_degree: 4.0, seed: 3, ..Default::default() }),
        ZoneParams::default(),
        EndpointPolicy::Explicit { source: NodeId(0), destination: NodeId(9) },
        0,
        None,
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws: Vec<String> =
        (0..5).map(|_| sample_umda(&model, &instance.overlay, NodeId(0), NodeId(9), &mut rng).to_string()).collect();
    println!("\nfive samples: {}", draws.join("  "));

    let big = Instance::prepare(
        &TopologySource::Generate(TopologyParams { n: 300, seed: 4, ..Default::default() }),
        ZoneParams::default(),
        EndpointPolicy::RandomConnected,
        4,
        None,
    )
    .unwrap();
    let params = EdaParams { variant: EdaVariant::Umda, seed: 4, ..Default::default() };
    let run = run_eda(&big.overlay, big.source, big.destination, &params, &big.penalty).unwrap();
    println!(
        "\n300-node run: best {} after {} generations (oracle {:?})",
        run.best_fitness,
        run.generations_used,
        big.oracle.as_ref().map(|o| o.0)
    );
}

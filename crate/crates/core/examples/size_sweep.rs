//! Compare the engines across network sizes on paired instances and print
//! the three summary tables.
//!
//! ```bash
//! cargo run --release -p zrp-evo --example size_sweep -- [repeats]
//! ```

use zrp_evo::eda::EdaVariant;
use zrp_evo::experiment::{sweep, EngineConfig, SweepConfig};
use zrp_evo::report::{fig3_csv, fig4_csv};
use zrp_evo::topology::TopologyParams;
use zrp_evo::zrp::ZoneParams;

fn main() {
    let repeats = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let config = SweepConfig {
        sizes: vec![50, 100, 200, 400],
        repeats,
        topology: TopologyParams::default(),
        zone: ZoneParams::default(),
        engines: vec![EngineConfig::ga(), EngineConfig::eda(EdaVariant::Umda), EngineConfig::eda(EdaVariant::Gaussian)],
        seed: 1,
        penalty: None,
    };
    let summary = sweep(&config).expect("sweep");

    println!("generations until the stopping rule fired\n{}", fig3_csv(&summary));
    println!("best fitness reached\n{}", fig4_csv(&summary));

    let hits = summary.trials.iter().filter(|t| t.result.oracle_gap == Some(0.0)).count();
    println!("{hits}/{} trials reached the overlay optimum", summary.trials.len());
}

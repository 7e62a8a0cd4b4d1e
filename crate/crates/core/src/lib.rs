//! Route discovery between routing zones of randomly generated ad-hoc
//! networks, searched with a genetic algorithm or an estimation of
//! distribution algorithm.
//!
//! The pipeline is
//!
//! 1. [`topology`]: generate or load a [`Network`];
//! 2. [`zrp`]: build every node's routing zone and the [`BordercastOverlay`]
//!    towards a destination;
//! 3. [`routes`]: encode candidate routes over the overlay and score them;
//! 4. [`ga`] / [`eda`]: evolve routes and return a [`RunRecord`];
//! 5. [`experiment`]: compare engines against the exact overlay optimum over
//!    seeded trials and size sweeps, with [`report`] writing the CSV tables.
//!
//! ```
//! use zrp_evo::prelude::*;
//!
//! let net = load_network("5\n0 1 1\n1 2 1\n2 3 1\n3 4 1").unwrap();
//! let zones = build_zone_table(&net, ZoneParams::new(2).unwrap());
//! let overlay = build_overlay(&zones, NodeId(4));
//! let penalty = PenaltyPolicy::for_instance(net.node_count(), net.max_cost(), &overlay);
//! let run = run_ga(&overlay, NodeId(0), NodeId(4), &GaParams::default(), &penalty).unwrap();
//! assert_eq!(run.best_fitness, 4.0);
//! ```

pub mod cli;
pub mod eda;
pub mod experiment;
pub mod ga;
pub mod paths;
pub mod record;
pub mod report;
pub mod routes;
pub mod topology;
pub mod zrp;

pub use record::RunRecord;
pub use topology::{Network, NodeId};
pub use zrp::BordercastOverlay;

pub mod prelude {
    pub use crate::eda::{run_eda, EdaParams, EdaVariant, StdEstimator};
    pub use crate::experiment::{
        oracle_shortest, run_trial, sweep, EndpointPolicy, EngineConfig, SweepConfig, TopologySource, TrialConfig,
    };
    pub use crate::ga::{run_ga, GaParams};
    pub use crate::record::{detect_convergence, RunRecord};
    pub use crate::routes::{decode_physical_path, evaluate_fitness, PenaltyPolicy, Route};
    pub use crate::topology::{generate_random_network, load_network, Network, NodeId, TopologyParams};
    pub use crate::zrp::{build_overlay, build_zone_table, BordercastOverlay, ZoneParams};
}

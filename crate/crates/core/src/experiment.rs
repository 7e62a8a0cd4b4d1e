//! Seeded trials and size sweeps comparing the engines.
//!
//! A trial builds (or takes) a network, its zone table and the overlay for the
//! chosen destination, runs one engine and attaches the exact overlay optimum
//! from Dijkstra. A sweep runs every engine on the same instances for each
//! network size and repeat, then aggregates generations, converged values and
//! the mean average-fitness curve per `(size, engine)`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eda::{run_eda, EdaParams, EdaVariant};
use crate::ga::{run_ga, GaParams};
use crate::paths::shortest_path_tree;
pub use crate::record::detect_convergence;
use crate::record::{EngineError, RunRecord};
use crate::routes::{is_linked, PenaltyPolicy, Route};
use crate::topology::{generate_random_network, Network, NodeId, TopologyError, TopologyParams};
use crate::zrp::{build_overlay, build_zone_table, BordercastOverlay, ZoneParams, ZoneTable};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("no connected pair of distinct nodes to route between")]
    NoConnectedPair,
    #[error("node {node} out of range for a network of {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("source and destination must differ")]
    SameEndpoints,
    #[error("sweep needs at least one size, one engine and one repeat")]
    EmptySweep,
    #[error("n = {n}, repeat {repeat}, {engine}: {source}")]
    Trial {
        n: usize,
        repeat: usize,
        engine: String,
        #[source]
        source: Box<ExperimentError>,
    },
}

/// Exact minimum-cost overlay route, ties to the lexicographically smallest.
pub fn oracle_shortest(overlay: &BordercastOverlay, source: NodeId, destination: NodeId) -> Option<(u64, Route)> {
    let tree = shortest_path_tree(overlay.node_count(), source, Some(destination), |u| overlay.arcs_from(u).to_vec());
    let cost = tree.cost(destination)?;
    let route = Route::new(tree.path(destination)?.to_vec()).ok()?;
    Some((cost, route))
}

#[derive(Debug, Clone)]
pub enum TopologySource {
    Generate(TopologyParams),
    Loaded(Arc<Network>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndpointPolicy {
    Explicit {
        source: NodeId,
        destination: NodeId,
    },
    /// Uniform over ordered pairs of distinct nodes sharing a component.
    RandomConnected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EngineConfig {
    Ga(GaParams),
    Eda(EdaParams),
}

impl EngineConfig {
    pub fn ga() -> Self {
        Self::Ga(GaParams::default())
    }

    pub fn eda(variant: EdaVariant) -> Self {
        Self::Eda(EdaParams { variant, ..Default::default() })
    }

    /// `ga`, `eda-umda` or `eda-gauss`.
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Ga(_) => "ga",
            Self::Eda(p) => match p.variant {
                EdaVariant::Umda => "eda-umda",
                EdaVariant::Gaussian => "eda-gauss",
            },
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Self::Ga(p) => p.seed,
            Self::Eda(p) => p.seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::Ga(p) => p.seed = seed,
            Self::Eda(p) => p.seed = seed,
        }
        out
    }

    pub fn stall_window(&self) -> usize {
        match self {
            Self::Ga(p) => p.stall_window,
            Self::Eda(p) => p.stall_window,
        }
    }

    pub fn run(
        &self,
        overlay: &BordercastOverlay,
        source: NodeId,
        destination: NodeId,
        penalty: &PenaltyPolicy,
    ) -> Result<RunRecord, EngineError> {
        match self {
            Self::Ga(p) => run_ga(overlay, source, destination, p, penalty),
            Self::Eda(p) => run_eda(overlay, source, destination, p, penalty),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub topology: TopologySource,
    pub zone: ZoneParams,
    pub endpoints: EndpointPolicy,
    pub engine: EngineConfig,
    /// Seeds the endpoint draw.
    pub trial_seed: u64,
    /// Overrides the default penalty per missing link.
    pub penalty: Option<f64>,
}

/// A routing problem ready for the engines.
#[derive(Debug, Clone)]
pub struct Instance {
    pub network: Arc<Network>,
    pub zones: ZoneTable,
    pub overlay: BordercastOverlay,
    pub source: NodeId,
    pub destination: NodeId,
    pub penalty: PenaltyPolicy,
    pub oracle: Option<(u64, Route)>,
    pub topology_seed: Option<u64>,
}

impl Instance {
    pub fn prepare(
        topology: &TopologySource,
        zone: ZoneParams,
        endpoints: EndpointPolicy,
        trial_seed: u64,
        penalty: Option<f64>,
    ) -> Result<Self, ExperimentError> {
        let (network, cost_max, topology_seed) = match topology {
            TopologySource::Generate(p) => (Arc::new(generate_random_network(p)?), p.cost_max, Some(p.seed)),
            TopologySource::Loaded(net) => (Arc::clone(net), net.max_cost().max(1), None),
        };
        let (source, destination) = match endpoints {
            EndpointPolicy::Explicit { source, destination } => {
                let n = network.node_count();
                for node in [source, destination] {
                    if node.index() >= n {
                        return Err(ExperimentError::NodeOutOfRange { node, n });
                    }
                }
                if source == destination {
                    return Err(ExperimentError::SameEndpoints);
                }
                (source, destination)
            }
            EndpointPolicy::RandomConnected => {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
                random_connected_pair(&network, &mut rng).ok_or(ExperimentError::NoConnectedPair)?
            }
        };
        let zones = build_zone_table(&network, zone);
        let overlay = build_overlay(&zones, destination);
        let penalty = match penalty {
            Some(p) => PenaltyPolicy::new(p).map_err(|e| EngineError::InvalidParams(e.to_string()))?,
            None => PenaltyPolicy::for_instance(network.node_count(), cost_max, &overlay),
        };
        let oracle = oracle_shortest(&overlay, source, destination);
        Ok(Self { network, zones, overlay, source, destination, penalty, oracle, topology_seed })
    }

    pub fn run(&self, engine: &EngineConfig) -> Result<TrialResult, ExperimentError> {
        let run = engine.run(&self.overlay, self.source, self.destination, &self.penalty)?;
        let oracle_cost = self.oracle.as_ref().map(|(c, _)| *c as f64);
        let oracle_gap = oracle_cost.map(|c| run.best_fitness - c);
        Ok(TrialResult {
            engine: engine.tag().to_owned(),
            n: self.network.node_count(),
            radius: self.zones.params().radius(),
            source: self.source,
            destination: self.destination,
            topology_seed: self.topology_seed,
            engine_seed: engine.seed(),
            best_linked: is_linked(&run.best_route, &self.overlay),
            oracle_cost,
            oracle_gap,
            run,
        })
    }
}

/// Uniform ordered pair of distinct nodes in the same component.
pub fn random_connected_pair<R: Rng + ?Sized>(net: &Network, rng: &mut R) -> Option<(NodeId, NodeId)> {
    let components = net.components();
    let total: usize = components.iter().map(|c| c.len() * (c.len() - 1)).sum();
    if total == 0 {
        return None;
    }
    let mut ticket = rng.random_range(0..total);
    for c in &components {
        let pairs = c.len() * (c.len() - 1);
        if ticket < pairs {
            let s = ticket / (c.len() - 1);
            let mut d = ticket % (c.len() - 1);
            if d >= s {
                d += 1;
            }
            return Some((c[s], c[d]));
        }
        ticket -= pairs;
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub engine: String,
    pub n: usize,
    pub radius: usize,
    pub source: NodeId,
    pub destination: NodeId,
    pub topology_seed: Option<u64>,
    pub engine_seed: u64,
    pub run: RunRecord,
    pub oracle_cost: Option<f64>,
    /// `best_fitness - oracle_cost`, never negative.
    pub oracle_gap: Option<f64>,
    /// Whether the best route uses only overlay arcs.
    pub best_linked: bool,
}

pub fn run_trial(config: &TrialConfig) -> Result<TrialResult, ExperimentError> {
    let instance =
        Instance::prepare(&config.topology, config.zone, config.endpoints, config.trial_seed, config.penalty)?;
    instance.run(&config.engine)
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one `(size, repeat)` cell of a sweep; `stream` separates the
/// topology, endpoint and engine seeds of the same cell.
pub fn derive_seed(base: u64, size: usize, repeat: usize, stream: u64) -> u64 {
    mix(mix(mix(base ^ stream) ^ size as u64) ^ repeat as u64)
}

pub const TOPOLOGY_STREAM: u64 = 0x746f_706f;
pub const ENDPOINT_STREAM: u64 = 0x656e_6470;
pub const ENGINE_STREAM: u64 = 0x656e_6769;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub repeats: usize,
    /// `n` and `seed` are overridden per cell.
    pub topology: TopologyParams,
    pub zone: ZoneParams,
    pub engines: Vec<EngineConfig>,
    pub seed: u64,
    pub penalty: Option<f64>,
}

/// One trial of a sweep with its cell coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTrial {
    pub repeat: usize,
    pub result: TrialResult,
}

/// Aggregate over the repeats of one `(size, engine)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineSummary {
    pub n: usize,
    pub engine: String,
    pub repeats: usize,
    pub mean_generations: f64,
    pub std_generations: f64,
    pub converged_count: usize,
    pub mean_best: f64,
    pub std_best: f64,
    /// Mean of the per-generation average fitness; runs that stopped early
    /// carry their last value forward.
    pub mean_avg_curve: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rows: Vec<EngineSummary>,
    pub trials: Vec<SweepTrial>,
}

impl SweepSummary {
    pub fn row(&self, n: usize, engine: &str) -> Option<&EngineSummary> {
        self.rows.iter().find(|r| r.n == n && r.engine == engine)
    }
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Aggregates the trials of one `(size, engine)` cell.
pub fn summarize(n: usize, engine: &str, trials: &[&TrialResult]) -> EngineSummary {
    let gens: Vec<f64> = trials.iter().map(|t| t.run.generations_used as f64).collect();
    let best: Vec<f64> = trials.iter().map(|t| t.run.best_fitness).collect();
    let (mean_generations, std_generations) = mean_std(&gens);
    let (mean_best, std_best) = mean_std(&best);
    let horizon = trials.iter().map(|t| t.run.avg_per_gen.len()).max().unwrap_or(0);
    let mean_avg_curve = (0..horizon)
        .map(|g| {
            let sum: f64 = trials
                .iter()
                .map(|t| {
                    let curve = &t.run.avg_per_gen;
                    curve[g.min(curve.len() - 1)]
                })
                .sum();
            sum / trials.len() as f64
        })
        .collect();
    EngineSummary {
        n,
        engine: engine.to_owned(),
        repeats: trials.len(),
        mean_generations,
        std_generations,
        converged_count: trials.iter().filter(|t| t.run.converged_at.is_some()).count(),
        mean_best,
        std_best,
        mean_avg_curve,
    }
}

/// Runs every engine on `repeats` instances of every size. Engines share the
/// network, endpoints and engine seed within a cell. Rows come out ordered by
/// size, then engine in the configured order.
pub fn sweep(config: &SweepConfig) -> Result<SweepSummary, ExperimentError> {
    if config.sizes.is_empty() || config.engines.is_empty() || config.repeats == 0 {
        return Err(ExperimentError::EmptySweep);
    }
    let cells: Vec<(usize, usize)> =
        config.sizes.iter().flat_map(|&n| (0..config.repeats).map(move |r| (n, r))).collect();

    let per_cell: Vec<Vec<TrialResult>> =
        cells.par_iter().map(|&(n, repeat)| run_cell(config, n, repeat)).collect::<Result<_, _>>()?;

    let mut trials = Vec::new();
    let mut rows = Vec::new();
    for (si, &n) in config.sizes.iter().enumerate() {
        let block = &per_cell[si * config.repeats..(si + 1) * config.repeats];
        for (ei, engine) in config.engines.iter().enumerate() {
            let results: Vec<&TrialResult> = block.iter().map(|cell| &cell[ei]).collect();
            rows.push(summarize(n, engine.tag(), &results));
        }
        for (repeat, cell) in block.iter().enumerate() {
            for result in cell {
                trials.push(SweepTrial { repeat, result: result.clone() });
            }
        }
    }
    Ok(SweepSummary { rows, trials })
}

fn run_cell(config: &SweepConfig, n: usize, repeat: usize) -> Result<Vec<TrialResult>, ExperimentError> {
    let wrap = |engine: &str, e: ExperimentError| ExperimentError::Trial {
        n,
        repeat,
        engine: engine.to_owned(),
        source: Box::new(e),
    };
    let topology = TopologySource::Generate(TopologyParams {
        n,
        seed: derive_seed(config.seed, n, repeat, TOPOLOGY_STREAM),
        ..config.topology.clone()
    });
    let instance = Instance::prepare(
        &topology,
        config.zone,
        EndpointPolicy::RandomConnected,
        derive_seed(config.seed, n, repeat, ENDPOINT_STREAM),
        config.penalty,
    )
    .map_err(|e| wrap("instance", e))?;
    let engine_seed = derive_seed(config.seed, n, repeat, ENGINE_STREAM);
    config
        .engines
        .iter()
        .map(|engine| instance.run(&engine.with_seed(engine_seed)).map_err(|e| wrap(engine.tag(), e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::load_network;

    fn line5() -> Arc<Network> {
        Arc::new(load_network("5\n0 1 1\n1 2 1\n2 3 1\n3 4 1").unwrap())
    }

    fn line_trial(engine: EngineConfig) -> TrialConfig {
        TrialConfig {
            topology: TopologySource::Loaded(line5()),
            zone: ZoneParams::new(2).unwrap(),
            endpoints: EndpointPolicy::Explicit { source: NodeId(0), destination: NodeId(4) },
            engine,
            trial_seed: 0,
            penalty: None,
        }
    }

    #[test]
    fn oracle_on_line() {
        let net = line5();
        let overlay = build_overlay(&build_zone_table(&net, ZoneParams::new(2).unwrap()), NodeId(4));
        let (cost, route) = oracle_shortest(&overlay, NodeId(0), NodeId(4)).unwrap();
        assert_eq!(cost, 4);
        assert_eq!(route.genes(), &[NodeId(0), NodeId(2), NodeId(4)]);
    }

    #[test]
    fn oracle_absent_when_unreachable() {
        let net = Network::from_edges(4, [(0, 1, 1)]).unwrap();
        let overlay = build_overlay(&build_zone_table(&net, ZoneParams::default()), NodeId(3));
        assert!(oracle_shortest(&overlay, NodeId(0), NodeId(3)).is_none());
    }

    #[test]
    fn line_trials_hit_the_optimum() {
        for engine in [EngineConfig::ga(), EngineConfig::eda(EdaVariant::Umda), EngineConfig::eda(EdaVariant::Gaussian)]
        {
            let r = run_trial(&line_trial(engine)).unwrap();
            assert_eq!(r.oracle_gap, Some(0.0));
            assert!(r.best_linked);
            assert_eq!(run_trial(&line_trial(EngineConfig::ga())).unwrap().run.best_fitness, 4.0);
        }
    }

    #[test]
    fn trial_is_deterministic() {
        let cfg = TrialConfig {
            topology: TopologySource::Generate(TopologyParams { n: 60, seed: 4, ..Default::default() }),
            zone: ZoneParams::default(),
            endpoints: EndpointPolicy::RandomConnected,
            engine: EngineConfig::ga(),
            trial_seed: 17,
            penalty: None,
        };
        assert_eq!(run_trial(&cfg).unwrap(), run_trial(&cfg).unwrap());
    }

    #[test]
    fn unreachable_destination_yields_penalized_best() {
        let net = Arc::new(Network::from_edges(4, [(0, 1, 1), (1, 2, 1)]).unwrap());
        let cfg = TrialConfig {
            topology: TopologySource::Loaded(net),
            zone: ZoneParams::default(),
            endpoints: EndpointPolicy::Explicit { source: NodeId(0), destination: NodeId(3) },
            engine: EngineConfig::Ga(GaParams { max_generations: 30, ..Default::default() }),
            trial_seed: 0,
            penalty: None,
        };
        let r = run_trial(&cfg).unwrap();
        assert!(r.oracle_cost.is_none() && r.oracle_gap.is_none());
        assert!(!r.best_linked);
    }

    #[test]
    fn no_connected_pair_is_an_error() {
        let cfg = TrialConfig {
            topology: TopologySource::Loaded(Arc::new(Network::from_edges(3, []).unwrap())),
            zone: ZoneParams::default(),
            endpoints: EndpointPolicy::RandomConnected,
            engine: EngineConfig::ga(),
            trial_seed: 0,
            penalty: None,
        };
        assert!(matches!(run_trial(&cfg), Err(ExperimentError::NoConnectedPair)));
    }

    #[test]
    fn connected_pair_shares_component() {
        let net = Network::from_edges(6, [(0, 1, 1), (3, 4, 1), (4, 5, 1)]).unwrap();
        let comps = net.components();
        for seed in 0..200 {
            let (s, d) = random_connected_pair(&net, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_ne!(s, d);
            assert!(comps.iter().any(|c| c.contains(&s) && c.contains(&d)));
        }
    }

    #[test]
    fn single_repeat_sweep_reduces_to_trial() {
        let cfg = SweepConfig {
            sizes: vec![40],
            repeats: 1,
            topology: TopologyParams { target_avg_degree: 6.0, ..Default::default() },
            zone: ZoneParams::default(),
            engines: vec![EngineConfig::ga(), EngineConfig::eda(EdaVariant::Umda)],
            seed: 5,
            penalty: None,
        };
        let s = sweep(&cfg).unwrap();
        assert_eq!(s.rows.len(), 2);
        assert_eq!(s.trials.len(), 2);
        for (row, trial) in s.rows.iter().zip(&s.trials) {
            assert_eq!(row.engine, trial.result.engine);
            assert_eq!(row.mean_generations, trial.result.run.generations_used as f64);
            assert_eq!(row.std_generations, 0.0);
            assert_eq!(row.mean_best, trial.result.run.best_fitness);
            assert_eq!(row.std_best, 0.0);
            assert_eq!(row.mean_avg_curve, trial.result.run.avg_per_gen);
        }
        assert_eq!(s.trials[0].result.oracle_cost, s.trials[1].result.oracle_cost);
    }

    #[test]
    fn empty_sweep_rejected() {
        let cfg = SweepConfig {
            sizes: vec![],
            repeats: 1,
            topology: TopologyParams::default(),
            zone: ZoneParams::default(),
            engines: vec![EngineConfig::ga()],
            seed: 0,
            penalty: None,
        };
        assert!(matches!(sweep(&cfg), Err(ExperimentError::EmptySweep)));
    }
}

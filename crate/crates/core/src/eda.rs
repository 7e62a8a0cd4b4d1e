//! Estimation of distribution algorithm over route chromosomes.
//!
//! Each generation keeps the best fraction of the population, fits a
//! univariate model to it and samples a whole new population from that model.
//! Two models are available:
//!
//! * [`DiscreteModel`] (UMDA): a route-length distribution plus one categorical
//!   distribution per interior gene position, all from marginal frequencies.
//! * [`GaussianModel`]: mean and standard deviation of the route length and of
//!   the node index at each interior position, sampled with normal draws that
//!   are rounded and clamped.
//!
//! Routes have different lengths, so the marginal for position `i` is fitted
//! only on the selected routes that have an interior gene at `i`. Positions
//! deeper than any selected route fall back to a uniform draw over all nodes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::ga::init_population;
use crate::record::{check_endpoints, EngineError, RunRecord, Tracker};
use crate::routes::{Individual, PenaltyPolicy, Route};
use crate::topology::NodeId;
use crate::zrp::BordercastOverlay;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdaVariant {
    Umda,
    Gaussian,
}

/// Divisor used for the Gaussian model's standard deviations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StdEstimator {
    /// Divide by `N`.
    #[default]
    Population,
    /// Divide by `N - 1` (zero for a single sample).
    Sample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EdaParams {
    pub population_size: usize,
    pub selected_fraction: f64,
    pub max_generations: usize,
    pub stall_window: usize,
    pub variant: EdaVariant,
    pub std_estimator: StdEstimator,
    /// Longest route the initial walks and Gaussian length draws may produce;
    /// the overlay node count when unset.
    pub max_route_len: Option<usize>,
    pub seed: u64,
}

impl Default for EdaParams {
    fn default() -> Self {
        Self {
            population_size: 50,
            selected_fraction: 0.5,
            max_generations: 1000,
            stall_window: 50,
            variant: EdaVariant::Umda,
            std_estimator: StdEstimator::Population,
            max_route_len: None,
            seed: 0,
        }
    }
}

impl EdaParams {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |msg: &str| Err(EngineError::InvalidParams(msg.to_owned()));
        if self.population_size < 2 {
            return bad("population size must be at least 2");
        }
        if !(self.selected_fraction > 0.0 && self.selected_fraction <= 1.0) {
            return bad("selected fraction must lie in (0, 1]");
        }
        if self.max_generations == 0 {
            return bad("max generations must be positive");
        }
        if self.stall_window == 0 {
            return bad("stall window must be positive");
        }
        if self.max_route_len.is_some_and(|l| l < 2) {
            return bad("max route length must be at least 2");
        }
        Ok(())
    }
}

/// Number of individuals kept by truncation selection.
pub fn selection_size(population: usize, fraction: f64) -> usize {
    // guard against 0.3 * 10 = 3.0000000000000004 rounding up to 4
    let raw = fraction * population as f64;
    let n = (raw - 1e-9).ceil() as usize;
    n.clamp(1, population)
}

/// The `⌈fraction · M⌉` lowest-fitness individuals, ties broken by position.
pub fn truncation_select(population: &[Individual], fraction: f64) -> Vec<&Individual> {
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&a, &b| population[a].fitness.total_cmp(&population[b].fitness).then(a.cmp(&b)));
    order.into_iter().take(selection_size(population.len(), fraction)).map(|i| &population[i]).collect()
}

/// Categorical distribution kept as exact counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marginal<T: Ord> {
    counts: BTreeMap<T, usize>,
    total: usize,
}

impl<T: Ord + Copy> Marginal<T> {
    fn from_values<I: IntoIterator<Item = T>>(values: I) -> Self {
        let mut counts = BTreeMap::new();
        let mut total = 0;
        for v in values {
            *counts.entry(v).or_insert(0) += 1;
            total += 1;
        }
        Self { counts, total }
    }

    pub fn count(&self, value: T) -> usize {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn probability(&self, value: T) -> f64 {
        self.count(value) as f64 / self.total as f64
    }

    /// `(value, probability)` in value order.
    pub fn probabilities(&self) -> impl Iterator<Item = (T, f64)> + '_ {
        self.counts.iter().map(move |(&v, &c)| (v, c as f64 / self.total as f64))
    }

    pub fn support(&self) -> impl Iterator<Item = T> + '_ {
        self.counts.keys().copied()
    }

    /// Value selected by a uniform draw `ticket` in `[0, total)`.
    fn pick(&self, mut ticket: usize) -> T {
        for (&v, &c) in &self.counts {
            if ticket < c {
                return v;
            }
            ticket -= c;
        }
        unreachable!("ticket beyond marginal total")
    }
}

/// UMDA model: length distribution and one categorical per interior gene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteModel {
    length: Marginal<usize>,
    positions: Vec<Marginal<NodeId>>,
}

impl DiscreteModel {
    pub fn length_marginal(&self) -> &Marginal<usize> {
        &self.length
    }

    /// Marginal of the gene at route index `i` (1 is the first interior
    /// gene), if any selected route had an interior gene there.
    pub fn position(&self, i: usize) -> Option<&Marginal<NodeId>> {
        self.positions.get(i.checked_sub(1)?)
    }

    /// Number of modelled interior positions.
    pub fn depth(&self) -> usize {
        self.positions.len()
    }

    /// Draws a raw gene sequence (before loop erasure). `draw(k)` must return
    /// a uniform integer in `[0, k)`.
    pub fn sample_genes_with<F>(
        &self,
        source: NodeId,
        destination: NodeId,
        node_count: usize,
        mut draw: F,
    ) -> Vec<NodeId>
    where
        F: FnMut(usize) -> usize,
    {
        let len = self.length.pick(draw(self.length.total));
        let mut genes = Vec::with_capacity(len);
        genes.push(source);
        for i in 1..len - 1 {
            let gene = match self.position(i) {
                Some(m) => m.pick(draw(m.total)),
                None => NodeId(draw(node_count)),
            };
            genes.push(gene);
        }
        genes.push(destination);
        genes
    }

    /// Probability that [`DiscreteModel::sample_genes_with`] yields `genes`:
    /// length probability times the product of the position marginals.
    pub fn raw_probability(&self, genes: &[NodeId], node_count: usize) -> f64 {
        let len = genes.len();
        let mut p = self.length.probability(len);
        for (i, &g) in genes.iter().enumerate().take(len.saturating_sub(1)).skip(1) {
            p *= match self.position(i) {
                Some(m) => m.probability(g),
                None if g.index() < node_count => 1.0 / node_count as f64,
                None => 0.0,
            };
        }
        p
    }
}

/// Fits the UMDA model by counting genes per position.
pub fn estimate_umda<'a, I>(selected: I) -> DiscreteModel
where
    I: IntoIterator<Item = &'a Route>,
{
    let routes: Vec<&Route> = selected.into_iter().collect();
    assert!(!routes.is_empty(), "cannot estimate from an empty selection");
    let length = Marginal::from_values(routes.iter().map(|r| r.len()));
    let depth = routes.iter().map(|r| r.interior().len()).max().unwrap_or(0);
    let positions =
        (0..depth).map(|k| Marginal::from_values(routes.iter().filter_map(|r| r.interior().get(k).copied()))).collect();
    DiscreteModel { length, positions }
}

pub fn sample_umda<R: Rng + ?Sized>(
    model: &DiscreteModel,
    overlay: &BordercastOverlay,
    source: NodeId,
    destination: NodeId,
    rng: &mut R,
) -> Route {
    let genes = model.sample_genes_with(source, destination, overlay.node_count(), |k| rng.random_range(0..k));
    Route::from_walk(&genes)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositionStats {
    pub mean: f64,
    pub std: f64,
}

/// Gaussian model over route length and per-position node indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianModel {
    pub length_mean: f64,
    pub length_std: f64,
    /// Entry `k` describes route index `k + 1`.
    pub positions: Vec<PositionStats>,
}

fn mean_std(values: &[f64], estimator: StdEstimator) -> PositionStats {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    let var = match estimator {
        StdEstimator::Population => ss / n,
        StdEstimator::Sample if values.len() > 1 => ss / (n - 1.0),
        StdEstimator::Sample => 0.0,
    };
    PositionStats { mean, std: var.sqrt() }
}

pub fn estimate_gaussian<'a, I>(selected: I, estimator: StdEstimator) -> GaussianModel
where
    I: IntoIterator<Item = &'a Route>,
{
    let routes: Vec<&Route> = selected.into_iter().collect();
    assert!(!routes.is_empty(), "cannot estimate from an empty selection");
    let lengths: Vec<f64> = routes.iter().map(|r| r.len() as f64).collect();
    let length = mean_std(&lengths, estimator);
    let depth = routes.iter().map(|r| r.interior().len()).max().unwrap_or(0);
    let positions = (0..depth)
        .map(|k| {
            let column: Vec<f64> =
                routes.iter().filter_map(|r| r.interior().get(k)).map(|g| g.index() as f64).collect();
            mean_std(&column, estimator)
        })
        .collect();
    GaussianModel { length_mean: length.mean, length_std: length.std, positions }
}

fn normal_draw<R: Rng + ?Sized>(mean: f64, std: f64, rng: &mut R) -> f64 {
    if std > 0.0 {
        Normal::new(mean, std).map(|d| d.sample(rng)).unwrap_or(mean)
    } else {
        mean
    }
}

pub fn sample_gaussian<R: Rng + ?Sized>(
    model: &GaussianModel,
    overlay: &BordercastOverlay,
    source: NodeId,
    destination: NodeId,
    rng: &mut R,
    max_len: usize,
) -> Route {
    let n = overlay.node_count();
    let max_len = max_len.max(2);
    let len = normal_draw(model.length_mean, model.length_std, rng).round().clamp(2.0, max_len as f64) as usize;
    let mut genes = Vec::with_capacity(len);
    genes.push(source);
    for k in 0..len - 2 {
        let gene = match model.positions.get(k) {
            Some(s) => normal_draw(s.mean, s.std, rng).round().clamp(0.0, (n - 1) as f64) as usize,
            None => rng.random_range(0..n),
        };
        genes.push(NodeId(gene));
    }
    genes.push(destination);
    Route::from_walk(&genes)
}

enum Model {
    Umda(DiscreteModel),
    Gaussian(GaussianModel),
}

pub fn run_eda(
    overlay: &BordercastOverlay,
    source: NodeId,
    destination: NodeId,
    params: &EdaParams,
    penalty: &PenaltyPolicy,
) -> Result<RunRecord, EngineError> {
    params.validate()?;
    check_endpoints(overlay, source, destination)?;
    let max_len = params.max_route_len.unwrap_or(overlay.node_count()).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut population =
        init_population(overlay, source, destination, params.population_size, penalty, max_len, &mut rng);
    let mut tracker = Tracker::new(&population, params.max_generations, params.stall_window);

    while !tracker.should_stop() {
        let selected = truncation_select(&population, params.selected_fraction);
        let routes = selected.iter().map(|i| &i.route);
        let model = match params.variant {
            EdaVariant::Umda => Model::Umda(estimate_umda(routes)),
            EdaVariant::Gaussian => Model::Gaussian(estimate_gaussian(routes, params.std_estimator)),
        };
        population = (0..params.population_size)
            .map(|_| {
                let route = match &model {
                    Model::Umda(m) => sample_umda(m, overlay, source, destination, &mut rng),
                    Model::Gaussian(m) => sample_gaussian(m, overlay, source, destination, &mut rng, max_len),
                };
                Individual::evaluate(route, overlay, penalty)
            })
            .collect();
        tracker.observe(&population);
    }
    Ok(tracker.finish())
}

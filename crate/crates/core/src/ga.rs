//! Generational genetic algorithm over route chromosomes.
//!
//! Each generation keeps the single best individual and fills the remaining
//! slots with offspring: two tournament-selected parents, one-point crossover
//! at a shared node (or a blind splice when the parents share none), then
//! suffix mutation that regrows the route from a random cut point.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::record::{best_index, check_endpoints, EngineError, RunRecord, Tracker};
use crate::routes::{extend_walk, random_route, Individual, PenaltyPolicy, Route};
use crate::topology::NodeId;
use crate::zrp::BordercastOverlay;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaParams {
    pub population_size: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub max_generations: usize,
    pub stall_window: usize,
    pub tournament_size: usize,
    /// Longest route the random walks may build; the overlay node count when
    /// unset.
    pub max_route_len: Option<usize>,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 50,
            crossover_prob: 0.9,
            mutation_prob: 0.9,
            max_generations: 1000,
            stall_window: 50,
            tournament_size: 2,
            max_route_len: None,
            seed: 0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |msg: &str| Err(EngineError::InvalidParams(msg.to_owned()));
        if self.population_size < 2 {
            return bad("population size must be at least 2");
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return bad("crossover probability must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return bad("mutation probability must lie in [0, 1]");
        }
        if self.max_generations == 0 {
            return bad("max generations must be positive");
        }
        if self.stall_window == 0 {
            return bad("stall window must be positive");
        }
        if self.tournament_size < 2 {
            return bad("tournament size must be at least 2");
        }
        if self.max_route_len.is_some_and(|l| l < 2) {
            return bad("max route length must be at least 2");
        }
        Ok(())
    }
}

/// `size` random routes with their fitness.
pub fn init_population<R: Rng + ?Sized>(
    overlay: &BordercastOverlay,
    source: NodeId,
    destination: NodeId,
    size: usize,
    penalty: &PenaltyPolicy,
    max_len: usize,
    rng: &mut R,
) -> Vec<Individual> {
    (0..size)
        .map(|_| {
            let route = random_route(overlay, source, destination, rng, max_len);
            Individual::evaluate(route, overlay, penalty)
        })
        .collect()
}

/// Index of the winner among `k` uniform draws with replacement: lowest
/// fitness, then lowest index.
pub fn tournament_select_index<R: Rng + ?Sized>(population: &[Individual], k: usize, rng: &mut R) -> usize {
    assert!(!population.is_empty(), "tournament on an empty population");
    let mut winner: Option<usize> = None;
    for _ in 0..k.max(1) {
        let i = rng.random_range(0..population.len());
        winner = match winner {
            None => Some(i),
            Some(w) => {
                let (a, b) = (&population[i], &population[w]);
                if a.fitness < b.fitness || (a.fitness == b.fitness && i < w) {
                    Some(i)
                } else {
                    Some(w)
                }
            }
        };
    }
    winner.unwrap_or(0)
}

pub fn tournament_select<'a, R: Rng + ?Sized>(population: &'a [Individual], k: usize, rng: &mut R) -> &'a Individual {
    &population[tournament_select_index(population, k, rng)]
}

/// One-point crossover of two routes with the same endpoints.
///
/// With shared interior nodes the cut is one of them, chosen uniformly: the
/// child takes `p1` up to the cut and `p2` after it. Otherwise each parent is
/// cut at a uniform interior index and the pieces are spliced, which may leave
/// an unlinked junction.
pub fn one_point_crossover<R: Rng + ?Sized>(p1: &Route, p2: &Route, rng: &mut R) -> Route {
    debug_assert_eq!(p1.source(), p2.source());
    debug_assert_eq!(p1.destination(), p2.destination());
    let in_p2: HashMap<NodeId, usize> = p2.genes().iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let last1 = p1.len() - 1;
    let last2 = p2.len() - 1;
    let common: Vec<(usize, usize)> = (1..last1)
        .filter_map(|i| {
            let j = *in_p2.get(&p1.genes()[i])?;
            (j > 0 && j < last2).then_some((i, j))
        })
        .collect();

    let child: Vec<NodeId> = if common.is_empty() {
        let cut1 = rng.random_range(1..=last1);
        let cut2 = rng.random_range(1..=last2);
        p1.genes()[..cut1].iter().chain(&p2.genes()[cut2..]).copied().collect()
    } else {
        let (i, j) = common[rng.random_range(0..common.len())];
        p1.genes()[..=i].iter().chain(&p2.genes()[j + 1..]).copied().collect()
    };
    Route::from_walk(&child)
}

/// Keeps `genes[..=m]` for a uniform interior `m` and regrows the rest with a
/// loop-erased walk that never revisits the kept prefix. Routes with no
/// interior gene come back unchanged.
pub fn mutate<R: Rng + ?Sized>(route: &Route, overlay: &BordercastOverlay, rng: &mut R, max_len: usize) -> Route {
    let last = route.len() - 1;
    if last < 2 {
        return route.clone();
    }
    let m = rng.random_range(1..last);
    let mut genes = route.genes()[..=m].to_vec();
    extend_walk(&mut genes, overlay, route.destination(), rng, max_len);
    Route::from_walk(&genes)
}

pub fn run_ga(
    overlay: &BordercastOverlay,
    source: NodeId,
    destination: NodeId,
    params: &GaParams,
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
        let elite = population[best_index(&population)].clone();
        let mut next = Vec::with_capacity(params.population_size);
        next.push(elite);
        while next.len() < params.population_size {
            let p1 = tournament_select(&population, params.tournament_size, &mut rng);
            let p2 = tournament_select(&population, params.tournament_size, &mut rng);
            let mut child = if rng.random::<f64>() < params.crossover_prob {
                one_point_crossover(&p1.route, &p2.route, &mut rng)
            } else {
                p1.route.clone()
            };
            if rng.random::<f64>() < params.mutation_prob {
                child = mutate(&child, overlay, &mut rng, max_len);
            }
            next.push(Individual::evaluate(child, overlay, penalty));
        }
        population = next;
        tracker.observe(&population);
    }
    Ok(tracker.finish())
}

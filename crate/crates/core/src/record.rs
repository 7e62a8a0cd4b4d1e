//! Per-run history shared by both engines.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::routes::{Individual, Route};
use crate::topology::NodeId;
use crate::zrp::BordercastOverlay;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("source and destination must differ (both are {0})")]
    SameEndpoints(NodeId),
    #[error("node {node} outside an overlay of {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

pub(crate) fn check_endpoints(
    overlay: &BordercastOverlay,
    source: NodeId,
    destination: NodeId,
) -> Result<(), EngineError> {
    let n = overlay.node_count();
    for node in [source, destination] {
        if node.index() >= n {
            return Err(EngineError::NodeOutOfRange { node, n });
        }
    }
    if source == destination {
        return Err(EngineError::SameEndpoints(source));
    }
    Ok(())
}

/// Outcome of one engine run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Best fitness seen so far, one entry per generation (the initial
    /// population is generation 0). Never increases.
    pub best_per_gen: Vec<f64>,
    /// Mean fitness of each generation's population.
    pub avg_per_gen: Vec<f64>,
    pub best_route: Route,
    pub best_fitness: f64,
    /// First generation of the final stall, when the run stopped on it.
    pub converged_at: Option<usize>,
    pub generations_used: usize,
}

/// First index `g` such that `best_per_gen` holds the same value on
/// `[g, g + stall_window)`.
pub fn detect_convergence(best_per_gen: &[f64], stall_window: usize) -> Option<usize> {
    if stall_window == 0 || best_per_gen.len() < stall_window {
        return None;
    }
    let mut run_start = 0;
    for i in 0..best_per_gen.len() {
        if best_per_gen[i] != best_per_gen[run_start] {
            run_start = i;
        }
        if i + 1 - run_start >= stall_window {
            return Some(run_start);
        }
    }
    None
}

/// Index of the lowest-fitness member, earliest on ties.
pub(crate) fn best_index(population: &[Individual]) -> usize {
    let mut best = 0;
    for (i, ind) in population.iter().enumerate().skip(1) {
        if ind.fitness < population[best].fitness {
            best = i;
        }
    }
    best
}

/// Best-so-far bookkeeping and the two stopping rules.
pub(crate) struct Tracker {
    best: Individual,
    best_per_gen: Vec<f64>,
    avg_per_gen: Vec<f64>,
    max_generations: usize,
    stall_window: usize,
    stall_start: usize,
}

impl Tracker {
    pub(crate) fn new(initial: &[Individual], max_generations: usize, stall_window: usize) -> Self {
        let best = initial[best_index(initial)].clone();
        let mut tracker = Self {
            best,
            best_per_gen: Vec::new(),
            avg_per_gen: Vec::new(),
            max_generations,
            stall_window,
            stall_start: 0,
        };
        tracker.push(initial);
        tracker
    }

    fn push(&mut self, population: &[Individual]) {
        let gen_best = &population[best_index(population)];
        if gen_best.fitness < self.best.fitness {
            self.best = gen_best.clone();
            self.stall_start = self.best_per_gen.len();
        }
        self.best_per_gen.push(self.best.fitness);
        let total: f64 = population.iter().map(|i| i.fitness).sum();
        self.avg_per_gen.push(total / population.len() as f64);
    }

    /// Records the next generation.
    pub(crate) fn observe(&mut self, population: &[Individual]) {
        self.push(population);
    }

    pub(crate) fn converged(&self) -> bool {
        self.best_per_gen.len() - self.stall_start >= self.stall_window
    }

    pub(crate) fn should_stop(&self) -> bool {
        self.best_per_gen.len() >= self.max_generations || self.converged()
    }

    pub(crate) fn finish(self) -> RunRecord {
        let converged_at = self.converged().then_some(self.stall_start);
        debug_assert_eq!(converged_at, detect_convergence(&self.best_per_gen, self.stall_window));
        RunRecord {
            generations_used: self.best_per_gen.len(),
            best_fitness: self.best.fitness,
            best_route: self.best.route,
            best_per_gen: self.best_per_gen,
            avg_per_gen: self.avg_per_gen,
            converged_at,
        }
    }
}

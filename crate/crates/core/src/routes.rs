//! Variable-length route chromosomes over the bordercast overlay.
//!
//! A [`Route`] lists overlay nodes from source to destination with no
//! repeats. Its fitness adds the overlay weight of every consecutive pair that
//! is linked in the overlay and a fixed penalty for every pair that is not.
//! Lower is better.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::NodeId;
use crate::zrp::{BordercastOverlay, ZoneTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RouteError {
    #[error("a route needs at least a source and a destination")]
    TooShort,
    #[error("node {0} appears more than once")]
    Repeated(NodeId),
    #[error("penalty per missing link must be positive and finite, got {0}")]
    BadPenalty(f64),
}

/// Simple path chromosome: `genes[0]` is the source, the last gene the
/// destination.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Route(Vec<NodeId>);

impl Route {
    pub fn new(genes: Vec<NodeId>) -> Result<Self, RouteError> {
        if genes.len() < 2 {
            return Err(RouteError::TooShort);
        }
        let mut seen = HashMap::with_capacity(genes.len());
        for &g in &genes {
            if seen.insert(g, ()).is_some() {
                return Err(RouteError::Repeated(g));
            }
        }
        Ok(Self(genes))
    }

    /// Loop-erases `walk` into a route. `walk` must start at the source and
    /// end at a different destination.
    pub fn from_walk(walk: &[NodeId]) -> Self {
        let genes = loop_erase(walk);
        debug_assert!(genes.len() >= 2 && genes.first() == walk.first() && genes.last() == walk.last());
        Self(genes)
    }

    pub fn genes(&self) -> &[NodeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn source(&self) -> NodeId {
        self.0[0]
    }

    pub fn destination(&self) -> NodeId {
        self.0[self.0.len() - 1]
    }

    /// Genes strictly between source and destination.
    pub fn interior(&self) -> &[NodeId] {
        &self.0[1..self.0.len() - 1]
    }

    pub fn into_genes(self) -> Vec<NodeId> {
        self.0
    }
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

/// Chronological loop erasure: whenever a node reappears, the cycle since its
/// first visit is cut out.
pub fn loop_erase(walk: &[NodeId]) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = Vec::with_capacity(walk.len());
    let mut pos: HashMap<NodeId, usize> = HashMap::with_capacity(walk.len());
    for &v in walk {
        if let Some(&p) = pos.get(&v) {
            for removed in out.drain(p + 1..) {
                pos.remove(&removed);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    out
}

/// Cost charged for each consecutive gene pair with no overlay arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyPolicy {
    per_missing_link: f64,
}

impl PenaltyPolicy {
    pub fn new(per_missing_link: f64) -> Result<Self, RouteError> {
        if !per_missing_link.is_finite() || per_missing_link <= 0.0 {
            return Err(RouteError::BadPenalty(per_missing_link));
        }
        Ok(Self { per_missing_link })
    }

    /// Default penalty for an instance: larger than `n * cost_max` and larger
    /// than any simple route over `overlay` can cost, so every linked route
    /// beats every route with a missing link.
    pub fn for_instance(node_count: usize, cost_max: u64, overlay: &BordercastOverlay) -> Self {
        let by_size = node_count as u64 * cost_max + 1;
        let by_overlay = overlay.simple_route_cost_bound() + 1;
        Self { per_missing_link: by_size.max(by_overlay) as f64 }
    }

    pub fn per_missing_link(&self) -> f64 {
        self.per_missing_link
    }
}

/// A route and its fitness under the run's overlay and penalty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub route: Route,
    pub fitness: f64,
}

impl Individual {
    pub fn evaluate(route: Route, overlay: &BordercastOverlay, penalty: &PenaltyPolicy) -> Self {
        let fitness = evaluate_fitness(&route, overlay, penalty);
        Self { route, fitness }
    }
}

/// Sum of overlay weights along the route, with the penalty standing in for
/// every missing arc.
pub fn evaluate_fitness(route: &Route, overlay: &BordercastOverlay, penalty: &PenaltyPolicy) -> f64 {
    route
        .genes()
        .windows(2)
        .map(|w| match overlay.weight(w[0], w[1]) {
            Some(c) => c as f64,
            None => penalty.per_missing_link,
        })
        .sum()
}

/// Number of consecutive pairs without an overlay arc.
pub fn missing_links(route: &Route, overlay: &BordercastOverlay) -> usize {
    route.genes().windows(2).filter(|w| !overlay.has_arc(w[0], w[1])).count()
}

pub fn is_linked(route: &Route, overlay: &BordercastOverlay) -> bool {
    missing_links(route, overlay) == 0
}

/// Loop-erased random walk on the overlay from `source`. If `destination` is
/// not reached within `max_len` steps it is appended, leaving a missing link.
/// The result has at most `max_len` genes.
pub fn random_route<R: Rng + ?Sized>(
    overlay: &BordercastOverlay,
    source: NodeId,
    destination: NodeId,
    rng: &mut R,
    max_len: usize,
) -> Route {
    assert_ne!(source, destination, "source and destination must differ");
    let mut genes = vec![source];
    extend_walk(&mut genes, overlay, destination, rng, max_len);
    Route(genes)
}

/// Continues a loop-erased walk from the last gene of `genes` towards
/// `destination`. Genes before the last one are frozen: the walk never steps
/// onto them. Always finishes with `destination` appended.
pub(crate) fn extend_walk<R: Rng + ?Sized>(
    genes: &mut Vec<NodeId>,
    overlay: &BordercastOverlay,
    destination: NodeId,
    rng: &mut R,
    max_len: usize,
) {
    let max_len = max_len.max(2);
    let anchor = genes.len() - 1;
    let n = overlay.node_count();
    let mut frozen = vec![false; n];
    for g in &genes[..anchor] {
        frozen[g.index()] = true;
    }
    let mut on_walk: HashMap<NodeId, usize> = HashMap::from([(genes[anchor], anchor)]);
    let mut candidates = Vec::new();

    for _ in 0..max_len {
        let current = genes[genes.len() - 1];
        candidates.clear();
        candidates.extend(overlay.arcs_from(current).iter().map(|&(t, _)| t).filter(|t| !frozen[t.index()]));
        if candidates.is_empty() {
            break;
        }
        let next = candidates[rng.random_range(0..candidates.len())];
        if next == destination {
            genes.push(destination);
            return;
        }
        if let Some(&p) = on_walk.get(&next) {
            for removed in genes.drain(p + 1..) {
                on_walk.remove(&removed);
            }
        } else {
            if genes.len() + 1 >= max_len {
                break;
            }
            on_walk.insert(next, genes.len());
            genes.push(next);
        }
    }
    genes.push(destination);
}

/// Expands a route into the physical node sequence by concatenating the
/// intra-zone segments of consecutive genes. `None` if some pair is not an
/// overlay arc.
pub fn decode_physical_path(route: &Route, zones: &ZoneTable) -> Option<Vec<NodeId>> {
    let destination = route.destination();
    let mut path = vec![route.source()];
    for w in route.genes().windows(2) {
        let (from, to) = (w[0], w[1]);
        let zone = zones.zone(from);
        let linked = zone.is_peripheral(to) || (to == destination && zone.contains(to));
        if !linked || from == to {
            return None;
        }
        let segment = zone.segment(to)?;
        path.extend_from_slice(&segment.path[1..]);
    }
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{load_network, Network};
    use crate::zrp::{build_overlay, build_zone_table, ZoneParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ids(v: &[usize]) -> Vec<NodeId> {
        v.iter().copied().map(NodeId).collect()
    }

    fn route(v: &[usize]) -> Route {
        Route::new(ids(v)).unwrap()
    }

    fn line5() -> (Network, ZoneTable, BordercastOverlay) {
        let net = load_network("5\n0 1 1\n1 2 1\n2 3 1\n3 4 1").unwrap();
        let zones = build_zone_table(&net, ZoneParams::new(2).unwrap());
        let overlay = build_overlay(&zones, NodeId(4));
        (net, zones, overlay)
    }

    #[test]
    fn route_invariants() {
        assert_eq!(Route::new(ids(&[3])), Err(RouteError::TooShort));
        assert_eq!(Route::new(ids(&[0, 1, 0, 2])), Err(RouteError::Repeated(NodeId(0))));
        let r = route(&[0, 2, 4]);
        assert_eq!(r.source(), NodeId(0));
        assert_eq!(r.destination(), NodeId(4));
        assert_eq!(r.interior(), &[NodeId(2)]);
    }

    #[test]
    fn loop_erasure_cuts_cycles() {
        assert_eq!(loop_erase(&ids(&[0, 1, 2, 1, 3])), ids(&[0, 1, 3]));
        assert_eq!(loop_erase(&ids(&[0, 1, 2, 0, 4])), ids(&[0, 4]));
        assert_eq!(loop_erase(&ids(&[0, 4, 2, 4])), ids(&[0, 4]));
        assert_eq!(loop_erase(&ids(&[0, 1, 2, 3])), ids(&[0, 1, 2, 3]));
    }

    #[test]
    fn fitness_on_line_overlay() {
        let (_, _, overlay) = line5();
        let penalty = PenaltyPolicy::new(6.0).unwrap();
        assert_eq!(evaluate_fitness(&route(&[0, 2, 4]), &overlay, &penalty), 4.0);
        assert_eq!(evaluate_fitness(&route(&[0, 3, 4]), &overlay, &penalty), 7.0);
        assert_eq!(evaluate_fitness(&route(&[3, 4]), &overlay, &penalty), 1.0);
        assert_eq!(missing_links(&route(&[0, 3, 4]), &overlay), 1);
    }

    #[test]
    fn bad_penalties_rejected() {
        assert!(PenaltyPolicy::new(0.0).is_err());
        assert!(PenaltyPolicy::new(f64::NAN).is_err());
    }

    #[test]
    fn default_penalty_exceeds_size_bound() {
        let (net, _, overlay) = line5();
        let p = PenaltyPolicy::for_instance(net.node_count(), 10, &overlay);
        assert!(p.per_missing_link() > 50.0);
    }

    #[test]
    fn random_route_on_line_is_forced() {
        let (_, _, overlay) = line5();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            assert_eq!(random_route(&overlay, NodeId(0), NodeId(4), &mut rng, 5), route(&[0, 2, 4]));
        }
    }

    #[test]
    fn random_route_without_moves_appends_destination() {
        let overlay = BordercastOverlay::from_arcs(3, NodeId(2), []);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_route(&overlay, NodeId(0), NodeId(2), &mut rng, 3), route(&[0, 2]));
    }

    #[test]
    fn random_route_respects_max_len() {
        // ring 0->1->2->...->9->0, destination unreachable
        let arcs = (0..10).map(|i| crate::zrp::Arc { from: NodeId(i), to: NodeId((i + 1) % 10), weight: 1 });
        let overlay = BordercastOverlay::from_arcs(11, NodeId(10), arcs);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = random_route(&overlay, NodeId(0), NodeId(10), &mut rng, 4);
        assert_eq!(r, route(&[0, 1, 2, 10]));
    }

    #[test]
    fn random_route_is_seeded() {
        let net = crate::topology::generate_random_network(&crate::topology::TopologyParams {
            n: 40,
            target_avg_degree: 5.0,
            seed: 5,
            ..Default::default()
        })
        .unwrap();
        let zones = build_zone_table(&net, ZoneParams::default());
        let overlay = build_overlay(&zones, NodeId(7));
        let a = random_route(&overlay, NodeId(1), NodeId(7), &mut ChaCha8Rng::seed_from_u64(3), 40);
        let b = random_route(&overlay, NodeId(1), NodeId(7), &mut ChaCha8Rng::seed_from_u64(3), 40);
        assert_eq!(a, b);
    }

    #[test]
    fn decode_concatenates_segments() {
        let (_, zones, _) = line5();
        assert_eq!(decode_physical_path(&route(&[0, 2, 4]), &zones), Some(ids(&[0, 1, 2, 3, 4])));
        assert_eq!(decode_physical_path(&route(&[3, 4]), &zones), Some(ids(&[3, 4])));
        assert_eq!(decode_physical_path(&route(&[0, 3, 4]), &zones), None);
    }
}

//! Single-source minimum-cost paths with a reproducible tie-break.
//!
//! Arc weights are positive integers, so path costs compare exactly and the
//! lexicographically smallest node sequence among all minimum-cost paths is a
//! well-defined answer. Every prefix of such a path is itself the smallest
//! minimum-cost path to its endpoint, which lets the tie-break be resolved
//! during relaxation.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::topology::NodeId;

/// Result of a single-source search: cost and node sequence for every
/// reached node, indexed by node.
#[derive(Debug, Clone)]
pub struct PathTree {
    source: NodeId,
    cost: Vec<Option<u64>>,
    path: Vec<Option<Vec<NodeId>>>,
}

impl PathTree {
    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn cost(&self, target: NodeId) -> Option<u64> {
        self.cost.get(target.index()).copied().flatten()
    }

    pub fn path(&self, target: NodeId) -> Option<&[NodeId]> {
        self.path.get(target.index())?.as_deref()
    }

    /// Reached nodes in index order.
    pub fn reached(&self) -> impl Iterator<Item = (NodeId, u64, &[NodeId])> + '_ {
        self.cost.iter().enumerate().filter_map(move |(i, c)| {
            let c = (*c)?;
            Some((NodeId(i), c, self.path[i].as_deref()?))
        })
    }
}

/// Dijkstra from `source` over `node_count` nodes. `arcs(u)` yields the
/// outgoing `(target, weight)` pairs of `u`; weights must be positive.
/// When `target` is given the search stops once it is settled.
pub fn shortest_path_tree<F, I>(node_count: usize, source: NodeId, target: Option<NodeId>, mut arcs: F) -> PathTree
where
    F: FnMut(NodeId) -> I,
    I: IntoIterator<Item = (NodeId, u64)>,
{
    let mut cost: Vec<Option<u64>> = vec![None; node_count];
    let mut path: Vec<Option<Vec<NodeId>>> = vec![None; node_count];
    let mut settled = vec![false; node_count];
    let mut heap = BinaryHeap::new();

    cost[source.index()] = Some(0);
    path[source.index()] = Some(vec![source]);
    heap.push(Reverse((0u64, source.index())));

    while let Some(Reverse((d, u))) = heap.pop() {
        if settled[u] || cost[u] != Some(d) {
            continue;
        }
        settled[u] = true;
        if target.map(NodeId::index) == Some(u) {
            break;
        }
        let base = path[u].clone().unwrap_or_default();
        for (v, w) in arcs(NodeId(u)) {
            debug_assert!(w > 0, "arc weights must be positive");
            let vi = v.index();
            if settled[vi] {
                continue;
            }
            let nd = d + w;
            let better = match cost[vi] {
                None => true,
                Some(old) if nd < old => true,
                Some(old) if nd == old => {
                    let current = path[vi].as_deref().unwrap_or(&[]);
                    lex_less_with_tail(&base, v, current)
                }
                _ => false,
            };
            if better {
                let improved = cost[vi] != Some(nd);
                cost[vi] = Some(nd);
                let mut p = base.clone();
                p.push(v);
                path[vi] = Some(p);
                if improved {
                    heap.push(Reverse((nd, vi)));
                }
            }
        }
    }

    PathTree { source, cost, path }
}

/// `prefix ++ [tail] < other` in lexicographic order.
fn lex_less_with_tail(prefix: &[NodeId], tail: NodeId, other: &[NodeId]) -> bool {
    prefix.iter().copied().chain(std::iter::once(tail)).cmp(other.iter().copied()) == std::cmp::Ordering::Less
}

//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's path or zone code; everything is brute force.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zrp_evo::routes::Route;
use zrp_evo::topology::{Network, NodeId};
use zrp_evo::zrp::BordercastOverlay;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi style graph with integer costs in `[1, cost_max]`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, edge_prob: f64, cost_max: u64) -> Network {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < edge_prob {
                edges.push((u, v, rng.random_range(1..=cost_max)));
            }
        }
    }
    Network::from_edges(n, edges).expect("generated edges are valid")
}

/// Weight matrix of the physical graph.
pub fn weights(net: &Network) -> Vec<Vec<Option<u64>>> {
    let n = net.node_count();
    let mut w = vec![vec![None; n]; n];
    for e in net.edges() {
        w[e.u.index()][e.v.index()] = Some(e.cost);
        w[e.v.index()][e.u.index()] = Some(e.cost);
    }
    w
}

/// All-pairs hop counts by Floyd–Warshall.
pub fn hop_matrix(net: &Network) -> Vec<Vec<Option<usize>>> {
    let n = net.node_count();
    let w = weights(net);
    let mut d: Vec<Vec<Option<usize>>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Some(0) } else { w[i][j].map(|_| 1) }).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

fn dfs_min(
    adj: &dyn Fn(usize) -> Vec<(usize, u64)>,
    at: usize,
    target: usize,
    visited: &mut Vec<bool>,
    cost: u64,
    best: &mut Option<u64>,
) {
    if at == target {
        *best = Some(best.map_or(cost, |b| b.min(cost)));
        return;
    }
    for (next, w) in adj(at) {
        if !visited[next] {
            visited[next] = true;
            dfs_min(adj, next, target, visited, cost + w, best);
            visited[next] = false;
        }
    }
}

fn dfs_all(
    adj: &dyn Fn(usize) -> Vec<(usize, u64)>,
    at: usize,
    target: usize,
    visited: &mut Vec<bool>,
    cost: u64,
    out: &mut Vec<u64>,
) {
    if at == target {
        out.push(cost);
        return;
    }
    for (next, w) in adj(at) {
        if !visited[next] {
            visited[next] = true;
            dfs_all(adj, next, target, visited, cost + w, out);
            visited[next] = false;
        }
    }
}

/// Cheapest simple physical path from `u` to `v` using only nodes in
/// `allowed`, by exhaustive enumeration.
pub fn brute_min_path(net: &Network, u: usize, v: usize, allowed: &[bool]) -> Option<u64> {
    if !allowed[u] || !allowed[v] {
        return None;
    }
    let w = weights(net);
    let adj = |x: usize| -> Vec<(usize, u64)> {
        (0..w.len()).filter_map(|y| w[x][y].filter(|_| allowed[y]).map(|c| (y, c))).collect()
    };
    let mut visited = vec![false; net.node_count()];
    visited[u] = true;
    let mut best = None;
    dfs_min(&adj, u, v, &mut visited, 0, &mut best);
    best
}

fn overlay_adj(overlay: &BordercastOverlay) -> impl Fn(usize) -> Vec<(usize, u64)> + '_ {
    move |x| overlay.arcs_from(NodeId(x)).iter().map(|&(y, w)| (y.index(), w)).collect()
}

/// Cheapest simple overlay route by exhaustive enumeration.
pub fn brute_overlay_min(overlay: &BordercastOverlay, s: usize, d: usize) -> Option<u64> {
    let adj = overlay_adj(overlay);
    let mut visited = vec![false; overlay.node_count()];
    visited[s] = true;
    let mut best = None;
    dfs_min(&adj, s, d, &mut visited, 0, &mut best);
    best
}

/// Costs of every simple overlay route from `s` to `d`.
pub fn all_overlay_route_costs(overlay: &BordercastOverlay, s: usize, d: usize) -> Vec<u64> {
    let adj = overlay_adj(overlay);
    let mut visited = vec![false; overlay.node_count()];
    visited[s] = true;
    let mut out = Vec::new();
    dfs_all(&adj, s, d, &mut visited, 0, &mut out);
    out
}

/// Relative frequency of each gene at route index `pos` among routes long
/// enough to have an interior gene there.
pub fn hand_count(routes: &[Route], pos: usize) -> BTreeMap<NodeId, f64> {
    let mut counts: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut total = 0usize;
    for r in routes {
        if pos >= 1 && pos + 1 < r.len() {
            *counts.entry(r.genes()[pos]).or_default() += 1;
            total += 1;
        }
    }
    counts.into_iter().map(|(k, c)| (k, c as f64 / total as f64)).collect()
}

/// A random simple route from `s` to `d` over `0..n`, ignoring the overlay.
pub fn random_simple_route<R: Rng>(rng: &mut R, n: usize, s: usize, d: usize, max_interior: usize) -> Route {
    let mut pool: Vec<usize> = (0..n).filter(|&x| x != s && x != d).collect();
    let k = rng.random_range(0..=max_interior.min(pool.len()));
    let mut genes = vec![NodeId(s)];
    for _ in 0..k {
        let i = rng.random_range(0..pool.len());
        genes.push(NodeId(pool.swap_remove(i)));
    }
    genes.push(NodeId(d));
    Route::new(genes).expect("distinct genes")
}

/// Cost of a physical node sequence, `None` if some hop is not an edge.
pub fn physical_cost(net: &Network, path: &[NodeId]) -> Option<u64> {
    path.windows(2).map(|w| net.cost(w[0], w[1])).sum()
}

/// Two-sided 95% normal-approximation half-width for the mean of `values`
/// (sample standard deviation).
pub fn ci95(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, 1.96 * (var / n).sqrt())
}

//! Random ad-hoc network topologies.
//!
//! A [`Network`] is an undirected graph with positive integer link costs.
//! Networks are either generated as random geometric graphs in the unit
//! square ([`generate_random_network`]) or read from the edge-list text format
//! ([`load_network`]):
//!
//! ```text
//! # comment lines start with '#'
//! 5
//! 0 1 1
//! 1 2 1
//! ```
//!
//! The first non-comment line is the node count, each further line is
//! `u v cost`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::paths::shortest_path_tree;

/// Dense node identifier in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i)
    }
}

/// Undirected link, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: u64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("network must have at least one node")]
    Empty,
    #[error("target average degree {degree} must be positive and below the node count {n}")]
    BadDegree { degree: f64, n: usize },
    #[error("cost range [{min}, {max}] must satisfy 1 <= min <= max")]
    BadCostRange { min: u64, max: u64 },
    #[error("node {node} out of range for a network of {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge cost must be positive")]
    NonPositiveCost,
}

/// Edge-list parse failure. Line numbers are 1-based physical lines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing node count")]
    MissingNodeCount,
    #[error("malformed line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },
    #[error("duplicate edge at line {line}")]
    DuplicateEdge { line: usize },
    #[error("non-positive cost at line {line}")]
    NonPositiveCost { line: usize },
    #[error("node out of range at line {line}")]
    NodeOutOfRange { line: usize },
}

/// Undirected weighted graph of mobile nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(NodeId, u64)>>,
    positions: Option<Vec<[f64; 2]>>,
}

impl Network {
    /// Builds a network from undirected edges, enforcing the graph invariants.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, TopologyError>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut builder = Builder::new(n)?;
        for (u, v, c) in edges {
            builder.add(u, v, c)?;
        }
        Ok(builder.finish(None))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n).map(NodeId)
    }

    /// Edges sorted by `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbours of `u` with link costs, sorted by neighbour id.
    pub fn neighbors(&self, u: NodeId) -> &[(NodeId, u64)] {
        &self.adjacency[u.index()]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u.index()].len()
    }

    pub fn cost(&self, u: NodeId, v: NodeId) -> Option<u64> {
        let adj = self.adjacency.get(u.index())?;
        adj.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| adj[i].1)
    }

    pub fn positions(&self) -> Option<&[[f64; 2]]> {
        self.positions.as_deref()
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    pub fn max_cost(&self) -> u64 {
        self.edges.iter().map(|e| e.cost).max().unwrap_or(0)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(NodeId(u));
                for &(v, _) in &self.adjacency[u] {
                    if !seen[v.index()] {
                        seen[v.index()] = true;
                        queue.push_back(v.index());
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for e in &self.edges {
            s.push_str(&format!("{} {} {}\n", e.u, e.v, e.cost));
        }
        s
    }
}

struct Builder {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    list: Vec<Edge>,
}

impl Builder {
    fn new(n: usize) -> Result<Self, TopologyError> {
        if n == 0 {
            return Err(TopologyError::Empty);
        }
        Ok(Self { n, edges: BTreeSet::new(), list: Vec::new() })
    }

    fn add(&mut self, u: usize, v: usize, cost: u64) -> Result<(), TopologyError> {
        for node in [u, v] {
            if node >= self.n {
                return Err(TopologyError::NodeOutOfRange { node, n: self.n });
            }
        }
        if u == v {
            return Err(TopologyError::SelfLoop(u));
        }
        if cost == 0 {
            return Err(TopologyError::NonPositiveCost);
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if !self.edges.insert((a, b)) {
            return Err(TopologyError::DuplicateEdge(a, b));
        }
        self.list.push(Edge { u: NodeId(a), v: NodeId(b), cost });
        Ok(())
    }

    fn finish(mut self, positions: Option<Vec<[f64; 2]>>) -> Network {
        self.list.sort_unstable();
        let mut adjacency = vec![Vec::new(); self.n];
        for e in &self.list {
            adjacency[e.u.index()].push((e.v, e.cost));
            adjacency[e.v.index()].push((e.u, e.cost));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Network { n: self.n, edges: self.list, adjacency, positions }
    }
}

/// Parameters of the random geometric generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyParams {
    pub n: usize,
    pub target_avg_degree: f64,
    pub cost_min: u64,
    pub cost_max: u64,
    pub seed: u64,
}

impl Default for TopologyParams {
    fn default() -> Self {
        Self { n: 100, target_avg_degree: 8.0, cost_min: 1, cost_max: 10, seed: 0 }
    }
}

impl TopologyParams {
    pub fn validate(&self) -> Result<(), TopologyError> {
        if self.n == 0 {
            return Err(TopologyError::Empty);
        }
        let d = self.target_avg_degree;
        if !d.is_finite() || d <= 0.0 || d >= self.n as f64 {
            return Err(TopologyError::BadDegree { degree: d, n: self.n });
        }
        if self.cost_min == 0 || self.cost_min > self.cost_max {
            return Err(TopologyError::BadCostRange { min: self.cost_min, max: self.cost_max });
        }
        Ok(())
    }

    /// Connection radius giving `target_avg_degree` expected neighbours when
    /// boundary effects are ignored.
    pub fn radio_range(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.target_avg_degree / (PI * (self.n - 1) as f64)).sqrt()
    }
}

/// Random geometric graph: `n` uniform points in the unit square, linked when
/// within [`TopologyParams::radio_range`], costs uniform in
/// `[cost_min, cost_max]`.
pub fn generate_random_network(params: &TopologyParams) -> Result<Network, TopologyError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let positions: Vec<[f64; 2]> = (0..params.n).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect();
    let range2 = params.radio_range().powi(2);

    let mut builder = Builder::new(params.n)?;
    for i in 0..params.n {
        for j in (i + 1)..params.n {
            let dx = positions[i][0] - positions[j][0];
            let dy = positions[i][1] - positions[j][1];
            if dx * dx + dy * dy <= range2 {
                let cost = rng.random_range(params.cost_min..=params.cost_max);
                builder.add(i, j, cost)?;
            }
        }
    }
    Ok(builder.finish(Some(positions)))
}

/// Parses the edge-list text format.
pub fn load_network(text: &str) -> Result<Network, ParseError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (count_line, count) = lines.next().ok_or(ParseError::MissingNodeCount)?;
    let n: usize = count.parse().map_err(|_| ParseError::Malformed {
        line: count_line,
        reason: format!("expected node count, found {count:?}"),
    })?;
    let mut builder = Builder::new(n)
        .map_err(|_| ParseError::Malformed { line: count_line, reason: "node count must be positive".into() })?;

    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(ParseError::Malformed { line, reason: format!("expected \"u v cost\", found {content:?}") });
        }
        let parse_node = |s: &str| {
            s.parse::<usize>().map_err(|_| ParseError::Malformed { line, reason: format!("bad node id {s:?}") })
        };
        let u = parse_node(fields[0])?;
        let v = parse_node(fields[1])?;
        let cost: i64 = fields[2]
            .parse()
            .map_err(|_| ParseError::Malformed { line, reason: format!("bad cost {:?}", fields[2]) })?;
        if cost <= 0 {
            return Err(ParseError::NonPositiveCost { line });
        }
        builder.add(u, v, cost as u64).map_err(|e| match e {
            TopologyError::SelfLoop(_) => ParseError::SelfLoop { line },
            TopologyError::DuplicateEdge(..) => ParseError::DuplicateEdge { line },
            TopologyError::NodeOutOfRange { .. } => ParseError::NodeOutOfRange { line },
            TopologyError::NonPositiveCost => ParseError::NonPositiveCost { line },
            other => ParseError::Malformed { line, reason: other.to_string() },
        })?;
    }
    Ok(builder.finish(None))
}

/// Unweighted hop counts from `u`; unreachable nodes are absent.
pub fn hop_distances(net: &Network, u: NodeId) -> BTreeMap<NodeId, usize> {
    hop_distances_within(net, u, usize::MAX)
}

/// Breadth-first hop counts from `u`, truncated at `max_hops`.
pub fn hop_distances_within(net: &Network, u: NodeId, max_hops: usize) -> BTreeMap<NodeId, usize> {
    let mut hops = BTreeMap::from([(u, 0)]);
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        let h = hops[&x];
        if h == max_hops {
            continue;
        }
        for &(y, _) in net.neighbors(x) {
            if let std::collections::btree_map::Entry::Vacant(e) = hops.entry(y) {
                e.insert(h + 1);
                queue.push_back(y);
            }
        }
    }
    hops
}

/// Minimum-cost path from `u` to `v`, optionally restricted to `allowed`
/// nodes. Ties go to the lexicographically smallest node sequence.
pub fn min_cost_path(
    net: &Network,
    u: NodeId,
    v: NodeId,
    allowed: Option<&BTreeSet<NodeId>>,
) -> Option<(u64, Vec<NodeId>)> {
    if let Some(set) = allowed {
        if !set.contains(&u) || !set.contains(&v) {
            return None;
        }
    }
    let tree = shortest_path_tree(net.node_count(), u, Some(v), |x| {
        net.neighbors(x).iter().copied().filter(|(y, _)| allowed.is_none_or(|s| s.contains(y))).collect::<Vec<_>>()
    });
    Some((tree.cost(v)?, tree.path(v)?.to_vec()))
}

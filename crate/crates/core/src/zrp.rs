//! Routing zones and the bordercast overlay.
//!
//! Every node owns a zone: the nodes within `r` hops of it. Zone members at
//! exactly `r` hops are peripheral (border) nodes. Inside a zone the
//! intra-zone tables hold minimum-cost paths over the zone's induced
//! subgraph. Inter-zone route discovery then only ever hops from a node to one
//! of its peripheral nodes, or straight to the destination when the
//! destination is already in the zone. Those hops form the
//! [`BordercastOverlay`], the directed graph on which routes are encoded.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::paths::shortest_path_tree;
use crate::topology::{hop_distances_within, Network, NodeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("zone radius must be at least 1")]
pub struct ZeroRadius;

/// Zone radius in hops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZoneParams {
    radius: usize,
}

impl ZoneParams {
    pub fn new(radius: usize) -> Result<Self, ZeroRadius> {
        if radius == 0 {
            return Err(ZeroRadius);
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }
}

impl Default for ZoneParams {
    fn default() -> Self {
        Self { radius: 2 }
    }
}

/// Intra-zone route from a zone's center to one member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub cost: u64,
    pub path: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Zone {
    center: NodeId,
    hop_of: BTreeMap<NodeId, usize>,
    peripheral: BTreeSet<NodeId>,
    iarp: BTreeMap<NodeId, Segment>,
}

impl Zone {
    pub fn center(&self) -> NodeId {
        self.center
    }

    /// Members in ascending order, the center included.
    pub fn members(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.hop_of.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.hop_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hop_of.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.hop_of.contains_key(&v)
    }

    pub fn hop_of(&self, v: NodeId) -> Option<usize> {
        self.hop_of.get(&v).copied()
    }

    pub fn hops(&self) -> &BTreeMap<NodeId, usize> {
        &self.hop_of
    }

    pub fn peripheral(&self) -> &BTreeSet<NodeId> {
        &self.peripheral
    }

    pub fn is_peripheral(&self, v: NodeId) -> bool {
        self.peripheral.contains(&v)
    }

    /// Intra-zone route from the center to `v`.
    pub fn segment(&self, v: NodeId) -> Option<&Segment> {
        self.iarp.get(&v)
    }
}

/// Builds the zone of `center`.
///
/// When no member sits at exactly `radius` hops but the zone is not a
/// singleton, the outermost hop shell present is used as the peripheral set
/// so that the zone can still bordercast.
pub fn build_zone(net: &Network, center: NodeId, params: ZoneParams) -> Zone {
    let hop_of = hop_distances_within(net, center, params.radius);
    let max_hop = hop_of.values().copied().max().unwrap_or(0);
    let shell = max_hop.min(params.radius);
    let peripheral: BTreeSet<NodeId> = if max_hop == 0 {
        BTreeSet::new()
    } else {
        hop_of.iter().filter(|&(_, &h)| h == shell).map(|(&v, _)| v).collect()
    };

    let tree = shortest_path_tree(net.node_count(), center, None, |x| {
        net.neighbors(x).iter().copied().filter(|(y, _)| hop_of.contains_key(y)).collect::<Vec<_>>()
    });
    let iarp = tree.reached().map(|(v, cost, path)| (v, Segment { cost, path: path.to_vec() })).collect();

    Zone { center, hop_of, peripheral, iarp }
}

/// Zones of every node, indexed by center.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneTable {
    params: ZoneParams,
    zones: Vec<Zone>,
}

impl ZoneTable {
    pub fn params(&self) -> ZoneParams {
        self.params
    }

    pub fn node_count(&self) -> usize {
        self.zones.len()
    }

    pub fn zone(&self, center: NodeId) -> &Zone {
        &self.zones[center.index()]
    }

    pub fn zones(&self) -> &[Zone] {
        &self.zones
    }
}

pub fn build_zone_table(net: &Network, params: ZoneParams) -> ZoneTable {
    let zones = (0..net.node_count()).into_par_iter().map(|c| build_zone(net, NodeId(c), params)).collect();
    ZoneTable { params, zones }
}

/// Directed weighted arc of the bordercast overlay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arc {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: u64,
}

/// Overlay graph for route discovery towards a fixed destination.
///
/// `u -> p` exists for every peripheral node `p` of `zone(u)`, and
/// `u -> destination` exists whenever the destination is a member of
/// `zone(u)`. Weights are intra-zone route costs.
#[derive(Debug, Clone, PartialEq)]
pub struct BordercastOverlay {
    destination: NodeId,
    out: Vec<Vec<(NodeId, u64)>>,
}

impl BordercastOverlay {
    /// Builds an overlay from explicit arcs. Duplicate arcs keep the last
    /// weight.
    pub fn from_arcs<I>(node_count: usize, destination: NodeId, arcs: I) -> Self
    where
        I: IntoIterator<Item = Arc>,
    {
        let mut map = vec![BTreeMap::new(); node_count];
        for a in arcs {
            assert!(a.weight > 0, "overlay weights must be positive");
            map[a.from.index()].insert(a.to, a.weight);
        }
        let out = map.into_iter().map(|m| m.into_iter().collect()).collect();
        Self { destination, out }
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    /// Outgoing arcs of `u`, sorted by target.
    pub fn arcs_from(&self, u: NodeId) -> &[(NodeId, u64)] {
        &self.out[u.index()]
    }

    pub fn weight(&self, from: NodeId, to: NodeId) -> Option<u64> {
        let arcs = self.out.get(from.index())?;
        arcs.binary_search_by_key(&to, |&(t, _)| t).ok().map(|i| arcs[i].1)
    }

    pub fn has_arc(&self, from: NodeId, to: NodeId) -> bool {
        self.weight(from, to).is_some()
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&(to, weight)| Arc { from: NodeId(u), to, weight }))
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Upper bound on the cost of any simple overlay route: every node is the
    /// tail of at most one arc of such a route.
    pub fn simple_route_cost_bound(&self) -> u64 {
        self.out.iter().map(|list| list.iter().map(|&(_, w)| w).max().unwrap_or(0)).sum()
    }
}

pub fn build_overlay(zones: &ZoneTable, destination: NodeId) -> BordercastOverlay {
    let out = zones
        .zones
        .iter()
        .map(|zone| {
            let u = zone.center;
            let mut targets: BTreeMap<NodeId, u64> = BTreeMap::new();
            for &p in &zone.peripheral {
                targets.insert(p, zone.iarp[&p].cost);
            }
            if u != destination {
                if let Some(seg) = zone.iarp.get(&destination) {
                    targets.insert(destination, seg.cost);
                }
            }
            targets.into_iter().collect()
        })
        .collect();
    BordercastOverlay { destination, out }
}

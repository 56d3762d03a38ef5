//! Single-packet routing engines.
//!
//! Every engine is a pure function of immutable scenario state; scratch
//! state (visited sets, stacks) lives on the call stack, so any number of
//! routes can run concurrently.

mod bvr;
mod dispatch;
mod gpsr;
mod lcr;
mod planar;

use std::collections::VecDeque;
use std::fmt;

use crate::coords::{AlignedCoords, GeoCoords, VirtualCoords};
use crate::distance::{DistanceError, DistanceFunction};
use crate::scalar::Scalar;
use crate::topology::{NodeId, Topology};

pub use bvr::bvr_route;
pub use dispatch::{route, Protocol, RoutingContext, RoutingError};
pub use gpsr::gpsr_route;
pub use lcr::lcr_route;
pub use planar::{planarize, PlanarGraph, PlanarMethod};

/// How a hop was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HopMode {
    Greedy,
    Perimeter,
    Backtrack,
    BeaconFallback,
    Flood,
}

impl HopMode {
    pub fn is_complementary(self) -> bool {
        self != HopMode::Greedy
    }

    pub fn name(self) -> &'static str {
        match self {
            HopMode::Greedy => "greedy",
            HopMode::Perimeter => "perimeter",
            HopMode::Backtrack => "backtrack",
            HopMode::BeaconFallback => "beacon-fallback",
            HopMode::Flood => "flood",
        }
    }
}

impl fmt::Display for HopMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureCause {
    LocalMinimum,
    TtlExceeded,
    PerimeterLoop,
    BacktrackExhausted,
    /// The scoped flood from the beacon did not cover the destination.
    FloodMiss,
    /// Source and destination lie in different components.
    Unreachable,
}

impl FailureCause {
    pub fn name(self) -> &'static str {
        match self {
            FailureCause::LocalMinimum => "local-minimum",
            FailureCause::TtlExceeded => "ttl-exceeded",
            FailureCause::PerimeterLoop => "perimeter-loop",
            FailureCause::BacktrackExhausted => "backtrack-exhausted",
            FailureCause::FloodMiss => "flood-miss",
            FailureCause::Unreachable => "unreachable",
        }
    }
}

impl fmt::Display for FailureCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    DeliveredGreedy,
    DeliveredMixed,
    Failed(FailureCause),
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::DeliveredGreedy => "delivered-greedy",
            Outcome::DeliveredMixed => "delivered-mixed",
            Outcome::Failed(cause) => cause.name(),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-packet outcome. `modes[i]` is the mode of the hop `path[i] -> path[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteResult {
    pub src: NodeId,
    pub dst: NodeId,
    pub path: Vec<NodeId>,
    pub modes: Vec<HopMode>,
    pub outcome: Outcome,
}

impl RouteResult {
    pub fn hops(&self) -> usize {
        self.modes.len()
    }

    pub fn is_delivered(&self) -> bool {
        !matches!(self.outcome, Outcome::Failed(_))
    }

    pub fn failure_cause(&self) -> Option<FailureCause> {
        match self.outcome {
            Outcome::Failed(c) => Some(c),
            _ => None,
        }
    }

    pub fn complementary_hops(&self) -> usize {
        self.modes.iter().filter(|m| m.is_complementary()).count()
    }

    /// Index into `path` of the node where the first complementary hop started.
    pub fn first_complementary_node(&self) -> Option<usize> {
        self.modes.iter().position(|m| m.is_complementary())
    }
}

/// Accumulates hops for one packet and closes it with an outcome.
pub(crate) struct Trace {
    src: NodeId,
    dst: NodeId,
    path: Vec<NodeId>,
    modes: Vec<HopMode>,
    ttl: usize,
}

impl Trace {
    pub(crate) fn new(src: NodeId, dst: NodeId, ttl: usize) -> Self {
        Self {
            src,
            dst,
            path: vec![src],
            modes: Vec::new(),
            ttl,
        }
    }

    pub(crate) fn current(&self) -> NodeId {
        *self.path.last().expect("path starts with the source")
    }

    /// False once another hop would exceed the TTL.
    pub(crate) fn can_hop(&self) -> bool {
        self.modes.len() < self.ttl
    }

    pub(crate) fn push(&mut self, next: NodeId, mode: HopMode) {
        self.path.push(next);
        self.modes.push(mode);
    }

    pub(crate) fn delivered(self) -> RouteResult {
        let outcome = if self.modes.iter().any(|m| m.is_complementary()) {
            Outcome::DeliveredMixed
        } else {
            Outcome::DeliveredGreedy
        };
        self.finish(outcome)
    }

    pub(crate) fn failed(self, cause: FailureCause) -> RouteResult {
        self.finish(Outcome::Failed(cause))
    }

    fn finish(self, outcome: Outcome) -> RouteResult {
        RouteResult {
            src: self.src,
            dst: self.dst,
            path: self.path,
            modes: self.modes,
            outcome,
        }
    }
}

/// Distance from a node's local coordinates to the destination's advertised coordinates.
///
/// Implementations return zero for `node == dst`: a node always recognises itself
/// as the destination, whatever its local coordinates say.
pub trait ProgressMetric<T>: Sync {
    fn distance(&self, node: NodeId, dst: NodeId) -> T;
}

impl<T, F> ProgressMetric<T> for F
where
    F: Fn(NodeId, NodeId) -> T + Sync,
{
    fn distance(&self, node: NodeId, dst: NodeId) -> T {
        self(node, dst)
    }
}

/// Planar distance between (possibly perceived) positions.
#[derive(Debug, Clone, Copy)]
pub struct GeoMetric<'a, T> {
    coords: &'a GeoCoords<T>,
}

impl<'a, T: Scalar> GeoMetric<'a, T> {
    pub fn new(coords: &'a GeoCoords<T>) -> Self {
        Self { coords }
    }
}

impl<T: Scalar> ProgressMetric<T> for GeoMetric<'_, T> {
    fn distance(&self, node: NodeId, dst: NodeId) -> T {
        if node == dst {
            return T::zero();
        }
        self.coords.of(node).dist(&self.coords.of(dst))
    }
}

/// Local (aligned) coordinates against the destination's integer coordinates.
#[derive(Debug, Clone, Copy)]
pub struct VirtualMetric<'a, T> {
    local: &'a AlignedCoords<T>,
    advertised: &'a VirtualCoords,
    function: DistanceFunction<T>,
}

impl<'a, T: Scalar> VirtualMetric<'a, T> {
    pub fn new(
        local: &'a AlignedCoords<T>,
        advertised: &'a VirtualCoords,
        function: DistanceFunction<T>,
    ) -> Result<Self, DistanceError> {
        if local.dims() != advertised.dims() {
            return Err(DistanceError::DimensionMismatch {
                local: local.dims(),
                destination: advertised.dims(),
            });
        }
        Ok(Self {
            local,
            advertised,
            function,
        })
    }
}

impl<T: Scalar> ProgressMetric<T> for VirtualMetric<'_, T> {
    fn distance(&self, node: NodeId, dst: NodeId) -> T {
        if node == dst {
            return T::zero();
        }
        self.function
            .vcs(self.local.of(node), self.advertised.of(dst))
            .expect("dimensions checked at construction")
    }
}

/// Neighbours of `u` strictly closer to `dst` than `u` itself.
pub fn forwarding_set<T: Scalar, M: ProgressMetric<T> + ?Sized>(
    u: NodeId,
    dst: NodeId,
    metric: &M,
    t: &Topology<T>,
) -> Vec<NodeId> {
    let here = metric.distance(u, dst);
    t.neighbors(u)
        .iter()
        .copied()
        .filter(|&v| metric.distance(v, dst) < here)
        .collect()
}

/// Next greedy hop: `dst` itself when it is a neighbour (nodes know their
/// neighbours' ids, so a coordinate collision next to the destination does not
/// strand the packet), otherwise the forwarding-set member closest to `dst`
/// with ties going to the lowest id.
pub(crate) fn best_closer<T: Scalar, M: ProgressMetric<T> + ?Sized>(
    u: NodeId,
    dst: NodeId,
    metric: &M,
    neighbors: &[NodeId],
) -> Option<NodeId> {
    if neighbors.binary_search(&dst).is_ok() {
        return Some(dst);
    }
    let mut best_d = metric.distance(u, dst);
    let mut best = None;
    for &v in neighbors {
        let d = metric.distance(v, dst);
        if d < best_d {
            best_d = d;
            best = Some(v);
        }
    }
    best
}

/// Plain greedy forwarding; stalls at the first empty forwarding set.
pub fn greedy_route<T: Scalar, M: ProgressMetric<T> + ?Sized>(
    src: NodeId,
    dst: NodeId,
    metric: &M,
    t: &Topology<T>,
    ttl: usize,
) -> RouteResult {
    let mut trace = Trace::new(src, dst, ttl);
    loop {
        let cur = trace.current();
        if cur == dst {
            return trace.delivered();
        }
        let Some(next) = best_closer(cur, dst, metric, t.neighbors(cur)) else {
            return trace.failed(FailureCause::LocalMinimum);
        };
        if !trace.can_hop() {
            return trace.failed(FailureCause::TtlExceeded);
        }
        trace.push(next, HopMode::Greedy);
    }
}

/// Breadth-first shortest path (lowest-id parents). Each hop lowers the hop
/// distance to `dst` by one, so hops are reported as greedy.
pub fn sp_route<T: Scalar>(src: NodeId, dst: NodeId, t: &Topology<T>) -> RouteResult {
    let mut trace = Trace::new(src, dst, usize::MAX);
    if src == dst {
        return trace.delivered();
    }
    if !t.same_component(src, dst) {
        return trace.failed(FailureCause::Unreachable);
    }
    // Search from the destination so the path can be read forwards.
    let mut parent = vec![usize::MAX; t.len()];
    parent[dst] = dst;
    let mut queue = VecDeque::from([dst]);
    'search: while let Some(u) = queue.pop_front() {
        for &v in t.neighbors(u) {
            if parent[v] == usize::MAX {
                parent[v] = u;
                if v == src {
                    break 'search;
                }
                queue.push_back(v);
            }
        }
    }
    let mut cur = src;
    while cur != dst {
        cur = parent[cur];
        trace.push(cur, HopMode::Greedy);
    }
    trace.delivered()
}

//! Coordinate assignments: geographic views, hop-count virtual coordinates and
//! their aligned (neighbourhood-averaged) real-valued refinement.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::geom::Point;
use crate::scalar::Scalar;
use crate::topology::{Deployment, NodeId, PerceivedPositions, Topology};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoordError {
    #[error("anchor set needs at least 3 anchors, got {0}")]
    TooFewAnchors(usize),
    #[error("anchor {0} is listed twice")]
    DuplicateAnchor(NodeId),
    #[error("anchor {0} is not a node of the topology")]
    MissingAnchor(NodeId),
    #[error("node {node} cannot reach anchor {anchor}")]
    Unreachable { anchor: NodeId, node: NodeId },
    #[error("unknown alignment rule `{0}` (expected self or uniform)")]
    UnknownRule(String),
}

/// Breadth-first hop distance from `source`; `None` for nodes in other components.
pub fn bfs_hops<T: Scalar>(t: &Topology<T>, source: NodeId) -> Vec<Option<u32>> {
    let mut dist = vec![None; t.len()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0u32);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued nodes have a distance");
        for &v in t.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Hop distance of every node to `anchor`; fails if any node is unreachable.
pub fn hop_counts<T: Scalar>(t: &Topology<T>, anchor: NodeId) -> Result<Vec<u32>, CoordError> {
    if anchor >= t.len() {
        return Err(CoordError::MissingAnchor(anchor));
    }
    bfs_hops(t, anchor)
        .into_iter()
        .enumerate()
        .map(|(node, h)| h.ok_or(CoordError::Unreachable { anchor, node }))
        .collect()
}

/// Ordered anchor ids; dimension `i` of every virtual coordinate is the hop count to `ids[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorSet {
    ids: Vec<NodeId>,
}

impl AnchorSet {
    pub fn new(ids: Vec<NodeId>) -> Result<Self, CoordError> {
        if ids.len() < 3 {
            return Err(CoordError::TooFewAnchors(ids.len()));
        }
        for (i, id) in ids.iter().enumerate() {
            if ids[..i].contains(id) {
                return Err(CoordError::DuplicateAnchor(*id));
            }
        }
        Ok(Self { ids })
    }

    /// Nodes nearest the deployment corners, in the order bottom-left,
    /// bottom-right, top-right, top-left; `dims` of them are used (3 or 4).
    pub fn corners<T: Scalar>(d: &Deployment<T>, dims: usize) -> Result<Self, CoordError> {
        let (w, h) = (d.width(), d.height());
        let corners = [
            Point::new(T::zero(), T::zero()),
            Point::new(w, T::zero()),
            Point::new(w, h),
            Point::new(T::zero(), h),
        ];
        let ids = corners
            .iter()
            .take(dims)
            .filter_map(|c| d.nearest_node(c))
            .collect();
        Self::new(ids)
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn dims(&self) -> usize {
        self.ids.len()
    }
}

/// Integer hop-count coordinates, one entry per anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualCoords {
    dims: usize,
    values: Vec<u32>,
}

impl VirtualCoords {
    /// Wraps explicit per-node vectors; every vector must have the same length.
    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let dims = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == dims), "ragged coordinate rows");
        Self {
            dims,
            values: rows.concat(),
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.values.len().checked_div(self.dims).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn of(&self, node: NodeId) -> &[u32] {
        &self.values[node * self.dims..(node + 1) * self.dims]
    }

    /// Edges on which some dimension changes by more than one hop.
    pub fn lipschitz_violations<T: Scalar>(&self, t: &Topology<T>) -> Vec<(NodeId, NodeId)> {
        t.edges()
            .filter(|&(u, v)| {
                self.of(u)
                    .iter()
                    .zip(self.of(v))
                    .any(|(a, b)| a.abs_diff(*b) > 1)
            })
            .collect()
    }
}

/// Hop-count coordinates from every anchor.
pub fn build_vcs<T: Scalar>(t: &Topology<T>, anchors: &AnchorSet) -> Result<VirtualCoords, CoordError> {
    let per_anchor: Vec<Vec<u32>> = anchors
        .ids()
        .iter()
        .map(|&a| hop_counts(t, a))
        .collect::<Result<_, _>>()?;
    let dims = anchors.dims();
    let mut values = vec![0u32; t.len() * dims];
    for (k, hops) in per_anchor.iter().enumerate() {
        for (node, &h) in hops.iter().enumerate() {
            values[node * dims + k] = h;
        }
    }
    Ok(VirtualCoords { dims, values })
}

/// How one alignment round combines a node with its neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlignRule {
    /// `(mean(neighbours) + own) / 2`
    SelfWeighted,
    /// `(sum(neighbours) + own) / (n + 1)`
    #[default]
    UniformAverage,
}

impl fmt::Display for AlignRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlignRule::SelfWeighted => "self",
            AlignRule::UniformAverage => "uniform",
        })
    }
}

impl FromStr for AlignRule {
    type Err = CoordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "self" | "self-weighted" => Ok(AlignRule::SelfWeighted),
            "uniform" | "uniform-average" => Ok(AlignRule::UniformAverage),
            other => Err(CoordError::UnknownRule(other.to_string())),
        }
    }
}

/// Real-valued coordinates after `depth` synchronous alignment rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedCoords<T> {
    dims: usize,
    depth: u32,
    rule: AlignRule,
    values: Vec<T>,
}

impl<T: Scalar> AlignedCoords<T> {
    /// Depth-0 view of integer coordinates.
    pub fn from_virtual(vc: &VirtualCoords, rule: AlignRule) -> Self {
        Self {
            dims: vc.dims,
            depth: 0,
            rule,
            values: vc.values.iter().map(|&v| T::of_u32(v)).collect(),
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn rule(&self) -> AlignRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.values.len().checked_div(self.dims).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn of(&self, node: NodeId) -> &[T] {
        &self.values[node * self.dims..(node + 1) * self.dims]
    }

    /// One more round of the rule, reading only the current values.
    pub fn step(&self, t: &Topology<T>) -> Self {
        let dims = self.dims;
        let rule = self.rule;
        let mut values = vec![T::zero(); self.values.len()];
        values
            .par_chunks_mut(dims.max(1))
            .enumerate()
            .for_each(|(node, out)| {
                let own = self.of(node);
                let nbrs = t.neighbors(node);
                if nbrs.is_empty() {
                    out.copy_from_slice(own);
                    return;
                }
                let n = T::of(nbrs.len() as f64);
                for (i, slot) in out.iter_mut().enumerate() {
                    let sum: T = nbrs.iter().map(|&v| self.values[v * dims + i]).sum();
                    *slot = match rule {
                        AlignRule::SelfWeighted => (sum / n + own[i]) / T::of(2.0),
                        AlignRule::UniformAverage => (sum + own[i]) / (n + T::one()),
                    };
                }
            });
        Self {
            dims,
            depth: self.depth + 1,
            rule,
            values,
        }
    }
}

/// Applies `depth` synchronous rounds of `rule` to integer coordinates.
pub fn align<T: Scalar>(vc: &VirtualCoords, t: &Topology<T>, depth: u32, rule: AlignRule) -> AlignedCoords<T> {
    let mut cur = AlignedCoords::from_virtual(vc, rule);
    for _ in 0..depth {
        cur = cur.step(t);
    }
    cur
}

/// Per-node planar points used for geographic forwarding.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoCoords<T> {
    points: Vec<Point<T>>,
}

impl<T: Scalar> GeoCoords<T> {
    pub fn new(points: Vec<Point<T>>) -> Self {
        Self { points }
    }

    pub fn of(&self, node: NodeId) -> Point<T> {
        self.points[node]
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }
}

/// Perceived positions when given, true positions otherwise.
pub fn geo_view<T: Scalar>(t: &Topology<T>, perceived: Option<&PerceivedPositions<T>>) -> GeoCoords<T> {
    match perceived {
        Some(p) => GeoCoords::new(p.positions().to_vec()),
        None => GeoCoords::new(t.deployment().positions().to_vec()),
    }
}

/// Coordinate dump: a header line then `<id> <c_1> ... <c_k>` per node.
pub fn write_coords<T: Scalar>(ac: &AlignedCoords<T>, anchors: &AnchorSet) -> String {
    let mut out = String::new();
    let _ = write!(out, "depth {} rule {} anchors", ac.depth, ac.rule);
    for a in anchors.ids() {
        let _ = write!(out, " {a}");
    }
    out.push('\n');
    for node in 0..ac.len() {
        let _ = write!(out, "{node}");
        for c in ac.of(node) {
            let _ = write!(out, " {c:.6}");
        }
        out.push('\n');
    }
    out
}

//! Deployments, unit-disk connectivity and perturbed position views.
//!
//! Positions are in abstract distance units. Grid deployments put one node at
//! the centre of every cell; random deployments draw positions from a
//! ChaCha8 stream seeded with the scenario seed, so a `(seed, config)` pair
//! always reproduces the same bytes.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::num::NonZeroUsize;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::Point;
use crate::scalar::Scalar;

pub type NodeId = usize;

/// RNG stream used for deployment positions.
pub(crate) const DEPLOYMENT_STREAM: u64 = 0;
/// RNG stream used for localization error offsets.
pub(crate) const PERTURB_STREAM: u64 = 1;

pub(crate) fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("node {id} at ({x}, {y}) lies outside the {width} x {height} bounds")]
    OutOfBounds {
        id: NodeId,
        x: f64,
        y: f64,
        width: f64,
        height: f64,
    },
    #[error("void {index} extends outside the deployment bounds")]
    VoidOutOfBounds { index: usize },
    #[error("radio range must be positive, got {0}")]
    BadRange(f64),
    #[error("error fraction must lie in [0, 1], got {0}")]
    BadErrorFraction(f64),
    #[error("edge ({0}, {1}) references a missing node or is a self-loop")]
    BadEdge(NodeId, NodeId),
    #[error("no radius removes exactly {0} nodes around the chosen centre")]
    UnreachableRemovalCount(usize),
    #[error("mean degree {0} is not attainable with this deployment")]
    UnattainableDegree(f64),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Node positions plus the rectangle `[0, width] x [0, height]` that holds them.
///
/// Node ids are the indices into `positions`, so they are dense in `[0, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment<T> {
    positions: Vec<Point<T>>,
    width: T,
    height: T,
}

impl<T: Scalar> Deployment<T> {
    pub fn new(positions: Vec<Point<T>>, width: T, height: T) -> Result<Self, TopologyError> {
        for (id, p) in positions.iter().enumerate() {
            if p.x < T::zero() || p.y < T::zero() || p.x > width || p.y > height {
                return Err(TopologyError::OutOfBounds {
                    id,
                    x: p.x.as_f64(),
                    y: p.y.as_f64(),
                    width: width.as_f64(),
                    height: height.as_f64(),
                });
            }
        }
        Ok(Self {
            positions,
            width,
            height,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, id: NodeId) -> Point<T> {
        self.positions[id]
    }

    pub fn positions(&self) -> &[Point<T>] {
        &self.positions
    }

    pub fn width(&self) -> T {
        self.width
    }

    pub fn height(&self) -> T {
        self.height
    }

    pub fn center(&self) -> Point<T> {
        let two = T::of(2.0);
        Point::new(self.width / two, self.height / two)
    }

    /// Node closest to `target`; ties go to the lowest id.
    pub fn nearest_node(&self, target: &Point<T>) -> Option<NodeId> {
        let mut best: Option<(NodeId, T)> = None;
        for (id, p) in self.positions.iter().enumerate() {
            let d = p.dist_sq(target);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((id, d));
            }
        }
        best.map(|(id, _)| id)
    }

    /// Keeps the listed nodes (in the given order) and renumbers them densely.
    pub fn subset(&self, keep: &[NodeId]) -> Self {
        Self {
            positions: keep.iter().map(|&id| self.positions[id]).collect(),
            width: self.width,
            height: self.height,
        }
    }
}

/// `rows x cols` nodes at cell centres, numbered row-major from the bottom-left cell.
///
/// The node in column `x`, row `y` sits at `((x + 0.5) * spacing, (y + 0.5) * spacing)`
/// and has id `y * cols + x`.
pub fn generate_grid<T: Scalar>(rows: NonZeroUsize, cols: NonZeroUsize, spacing: T) -> Deployment<T> {
    assert!(spacing > T::zero(), "grid spacing must be positive");
    let (rows, cols) = (rows.get(), cols.get());
    let half = T::of(0.5);
    let mut positions = Vec::with_capacity(rows * cols);
    for y in 0..rows {
        for x in 0..cols {
            positions.push(Point::new(
                (T::of(x as f64) + half) * spacing,
                (T::of(y as f64) + half) * spacing,
            ));
        }
    }
    Deployment {
        positions,
        width: T::of(cols as f64) * spacing,
        height: T::of(rows as f64) * spacing,
    }
}

pub fn grid_node_id(cols: usize, x: usize, y: usize) -> NodeId {
    y * cols + x
}

/// `n` positions drawn i.i.d. uniformly from `[0, width) x [0, height)` with ChaCha8.
pub fn generate_random<T: Scalar>(n: NonZeroUsize, width: T, height: T, seed: u64) -> Deployment<T> {
    assert!(width > T::zero() && height > T::zero(), "area must be positive");
    let mut rng = seeded_rng(seed, DEPLOYMENT_STREAM);
    let (w, h) = (width.as_f64(), height.as_f64());
    let positions = (0..n.get())
        .map(|_| {
            let x: f64 = rng.gen::<f64>() * w;
            let y: f64 = rng.gen::<f64>() * h;
            // Narrowing to f32 may round up onto the boundary, never past it.
            Point::new(T::of(x).min(width), T::of(y).min(height))
        })
        .collect();
    Deployment {
        positions,
        width,
        height,
    }
}

/// A region whose nodes are removed to create a physical void.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VoidSpec<T> {
    Disc {
        center: Point<T>,
        radius: T,
    },
    Rect {
        center: Point<T>,
        half_width: T,
        half_height: T,
    },
}

impl<T: Scalar> VoidSpec<T> {
    /// Closed-region membership.
    pub fn contains(&self, p: &Point<T>) -> bool {
        match *self {
            VoidSpec::Disc { center, radius } => p.dist_sq(&center) <= radius * radius,
            VoidSpec::Rect {
                center,
                half_width,
                half_height,
            } => (p.x - center.x).abs() <= half_width && (p.y - center.y).abs() <= half_height,
        }
    }

    fn within(&self, width: T, height: T) -> bool {
        let (c, hx, hy) = match *self {
            VoidSpec::Disc { center, radius } => (center, radius, radius),
            VoidSpec::Rect {
                center,
                half_width,
                half_height,
            } => (center, half_width, half_height),
        };
        hx > T::zero()
            && hy > T::zero()
            && c.x - hx >= T::zero()
            && c.y - hy >= T::zero()
            && c.x + hx <= width
            && c.y + hy <= height
    }
}

/// Removes every node inside the union of `voids`; survivors keep their relative order.
///
/// Returns the carved deployment and the number of removed nodes.
pub fn carve_voids<T: Scalar>(
    d: &Deployment<T>,
    voids: &[VoidSpec<T>],
) -> Result<(Deployment<T>, usize), TopologyError> {
    if let Some(index) = voids.iter().position(|v| !v.within(d.width, d.height)) {
        return Err(TopologyError::VoidOutOfBounds { index });
    }
    let keep: Vec<NodeId> = (0..d.len())
        .filter(|&id| !voids.iter().any(|v| v.contains(&d.positions[id])))
        .collect();
    let removed = d.len() - keep.len();
    Ok((d.subset(&keep), removed))
}

/// Smallest-gap radius for a disc at `center` that removes exactly `count` nodes.
///
/// Scans the sorted node distances and returns the midpoint between the
/// `count`-th and `count + 1`-th distinct distance, so small float noise cannot
/// change the removal count.
pub fn disc_radius_removing<T: Scalar>(d: &Deployment<T>, center: &Point<T>, count: usize) -> Option<T> {
    if count == 0 || count > d.len() {
        return None;
    }
    let mut dists: Vec<T> = d.positions.iter().map(|p| p.dist(center)).collect();
    dists.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
    let inner = dists[count - 1];
    let outer = dists.get(count).copied().unwrap_or(inner + T::one());
    // Distances are compared with a relative slack because coincident rings
    // come out of sqrt with last-bit differences.
    let slack = T::of(1e-9) * (T::one() + outer);
    if outer - inner <= slack {
        return None;
    }
    Some((inner + outer) / T::of(2.0))
}

/// Unit-disk connectivity over a deployment.
#[derive(Debug, Clone)]
pub struct Topology<T> {
    deployment: Deployment<T>,
    radio_range: T,
    adjacency: Vec<Vec<NodeId>>,
    component: Vec<usize>,
    component_count: usize,
}

impl<T: Scalar> Topology<T> {
    /// Topology with explicit edges; used for synthetic fixtures whose adjacency
    /// is not a unit-disk graph of the stored positions.
    pub fn from_edges(
        deployment: Deployment<T>,
        radio_range: T,
        edges: &[(NodeId, NodeId)],
    ) -> Result<Self, TopologyError> {
        let n = deployment.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(TopologyError::BadEdge(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::assemble(deployment, radio_range, adjacency))
    }

    fn assemble(deployment: Deployment<T>, radio_range: T, adjacency: Vec<Vec<NodeId>>) -> Self {
        let n = adjacency.len();
        let mut component = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if component[start] != usize::MAX {
                continue;
            }
            component[start] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &adjacency[u] {
                    if component[v] == usize::MAX {
                        component[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        Self {
            deployment,
            radio_range,
            adjacency,
            component,
            component_count: count,
        }
    }

    pub fn deployment(&self) -> &Deployment<T> {
        &self.deployment
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn radio_range(&self) -> T {
        self.radio_range
    }

    pub fn position(&self, id: NodeId) -> Point<T> {
        self.deployment.position(id)
    }

    /// Sorted neighbour ids.
    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.adjacency[id]
    }

    pub fn are_adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.adjacency[id].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Mean neighbour count over every node, boundary nodes included.
    pub fn mean_degree(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.len() as f64
    }

    pub fn component_of(&self, id: NodeId) -> usize {
        self.component[id]
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count <= 1
    }

    pub fn same_component(&self, u: NodeId, v: NodeId) -> bool {
        self.component[u] == self.component[v]
    }

    /// Induced unit-disk topology on the largest component (ties: lowest component index).
    ///
    /// Returns the restricted topology and, for each new id, the original id.
    pub fn largest_component(&self) -> (Topology<T>, Vec<NodeId>) {
        let mut sizes = vec![0usize; self.component_count];
        for &c in &self.component {
            sizes[c] += 1;
        }
        let biggest = sizes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map_or(0, |(c, _)| c);
        let keep: Vec<NodeId> = (0..self.len()).filter(|&u| self.component[u] == biggest).collect();
        let mut new_id = vec![usize::MAX; self.len()];
        for (i, &old) in keep.iter().enumerate() {
            new_id[old] = i;
        }
        let adjacency = keep
            .iter()
            .map(|&old| self.adjacency[old].iter().map(|&v| new_id[v]).collect())
            .collect();
        (
            Self::assemble(self.deployment.subset(&keep), self.radio_range, adjacency),
            keep,
        )
    }
}

/// Unit-disk graph: `u ~ v` iff `0 < |pos(u) - pos(v)| <= radio_range`.
pub fn build_udg<T: Scalar>(d: &Deployment<T>, radio_range: T) -> Result<Topology<T>, TopologyError> {
    if !(radio_range > T::zero()) || !radio_range.is_finite() {
        return Err(TopologyError::BadRange(radio_range.as_f64()));
    }
    let r2 = radio_range * radio_range;
    let n = d.len();
    let mut adjacency = vec![Vec::new(); n];
    for u in 0..n {
        let pu = d.positions[u];
        for v in (u + 1)..n {
            let d2 = pu.dist_sq(&d.positions[v]);
            if d2 > T::zero() && d2 <= r2 {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
    }
    // Pushes arrive in increasing order for both endpoints, so lists are already sorted.
    Ok(Topology::assemble(d.clone(), radio_range, adjacency))
}

/// Smallest radio range whose unit-disk graph reaches at least `target` mean degree.
pub fn range_for_mean_degree<T: Scalar>(d: &Deployment<T>, target: f64) -> Result<T, TopologyError> {
    let n = d.len();
    let pairs_needed = (target * n as f64 / 2.0).ceil() as usize;
    let mut dists: Vec<T> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            let dd = d.positions[u].dist(&d.positions[v]);
            if dd > T::zero() {
                dists.push(dd);
            }
        }
    }
    if pairs_needed == 0 || pairs_needed > dists.len() {
        return Err(TopologyError::UnattainableDegree(target));
    }
    let k = pairs_needed - 1;
    dists.select_nth_unstable_by(k, |a, b| a.partial_cmp(b).expect("finite distances"));
    Ok(dists[k])
}

/// Positions as the nodes believe them to be under localization error.
#[derive(Debug, Clone, PartialEq)]
pub struct PerceivedPositions<T> {
    positions: Vec<Point<T>>,
    error_fraction: T,
    seed: u64,
}

impl<T: Scalar> PerceivedPositions<T> {
    pub fn positions(&self) -> &[Point<T>] {
        &self.positions
    }

    pub fn error_fraction(&self) -> T {
        self.error_fraction
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Offsets every node by a point drawn uniformly from the disc of radius
/// `error_fraction * radio_range`. Connectivity is untouched.
pub fn perturb_positions<T: Scalar>(
    t: &Topology<T>,
    error_fraction: T,
    seed: u64,
) -> Result<PerceivedPositions<T>, TopologyError> {
    if !(error_fraction >= T::zero() && error_fraction <= T::one()) {
        return Err(TopologyError::BadErrorFraction(error_fraction.as_f64()));
    }
    let max_offset = (error_fraction * t.radio_range).as_f64();
    let mut rng = seeded_rng(seed, PERTURB_STREAM);
    let positions = t
        .deployment
        .positions
        .iter()
        .map(|p| {
            let u: f64 = rng.gen();
            let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            if max_offset == 0.0 {
                return *p;
            }
            // sqrt(u) makes the draw uniform over the disc area; clamp guards rounding.
            let r = (max_offset * u.sqrt()).min(max_offset);
            let q = Point::new(p.x + T::of(r * theta.cos()), p.y + T::of(r * theta.sin()));
            if q.dist(p) > T::of(max_offset) {
                p.lerp(&q, T::of(max_offset) / q.dist(p))
            } else {
                q
            }
        })
        .collect();
    Ok(PerceivedPositions {
        positions,
        error_fraction,
        seed,
    })
}

/// Line-oriented topology dump: header, one line per node, one line per edge (`u < v`).
pub fn write_topology<T: Scalar>(t: &Topology<T>) -> String {
    let d = &t.deployment;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "nodes {} width {:.6} height {:.6} range {:.6}",
        d.len(),
        d.width,
        d.height,
        t.radio_range
    );
    for (id, p) in d.positions.iter().enumerate() {
        let _ = writeln!(out, "{} {:.6} {:.6}", id, p.x, p.y);
    }
    for (u, v) in t.edges() {
        let _ = writeln!(out, "{} {}", u, v);
    }
    out
}

/// Parses the format produced by [`write_topology`]. Edges are taken as given.
pub fn parse_topology<T: Scalar>(text: &str) -> Result<Topology<T>, TopologyError> {
    let err = |line: usize, reason: &str| TopologyError::Parse {
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let tok: Vec<&str> = header.split_whitespace().collect();
    if tok.len() != 8 || tok[0] != "nodes" || tok[2] != "width" || tok[4] != "height" || tok[6] != "range" {
        return Err(err(hl + 1, "expected `nodes <n> width <w> height <h> range <r>`"));
    }
    let num = |s: &str, line: usize| -> Result<f64, TopologyError> {
        s.parse::<f64>().map_err(|_| err(line, &format!("bad number `{s}`")))
    };
    let n: usize = tok[1].parse().map_err(|_| err(hl + 1, "bad node count"))?;
    let width = num(tok[3], hl + 1)?;
    let height = num(tok[5], hl + 1)?;
    let range = num(tok[7], hl + 1)?;
    let mut positions = Vec::with_capacity(n);
    let mut edges = Vec::new();
    for (i, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if positions.len() < n {
            if f.len() != 3 || f[0].parse::<usize>().ok() != Some(positions.len()) {
                return Err(err(i + 1, "expected `<id> <x> <y>` with consecutive ids"));
            }
            positions.push(Point::new(T::of(num(f[1], i + 1)?), T::of(num(f[2], i + 1)?)));
        } else {
            if f.len() != 2 {
                return Err(err(i + 1, "expected `<u> <v>`"));
            }
            let u = f[0].parse().map_err(|_| err(i + 1, "bad edge endpoint"))?;
            let v = f[1].parse().map_err(|_| err(i + 1, "bad edge endpoint"))?;
            edges.push((u, v));
        }
    }
    if positions.len() != n {
        return Err(err(0, "fewer node lines than the header announces"));
    }
    let d = Deployment::new(positions, T::of(width), T::of(height))?;
    Topology::from_edges(d, T::of(range), &edges)
}

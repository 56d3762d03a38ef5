//! Small hand-built networks used by tests, examples and the CLI.

use std::num::NonZeroUsize;

use crate::coords::{build_vcs, AnchorSet, VirtualCoords};
use crate::geom::Point;
use crate::topology::{grid_node_id, generate_grid, Deployment, NodeId, Topology};

/// Virtual coordinates of the three nodes in the quantization-void example.
pub const ABC_COORDS: [[u32; 4]; 3] = [[3, 9, 7, 11], [2, 9, 8, 11], [3, 8, 8, 11]];

/// A chain A - B - C whose hop counts to four anchors are exactly [`ABC_COORDS`].
pub struct AbcFixture {
    pub topology: Topology<f64>,
    pub vcs: VirtualCoords,
    pub anchors: AnchorSet,
    pub a: NodeId,
    pub b: NodeId,
    pub c: NodeId,
}

/// Builds the A/B/C example: each of the three nodes reaches anchor `k` over a
/// private path of exactly `V_k` hops, and A - B - C are chained directly.
pub fn fixture_abc() -> AbcFixture {
    let (a, b, c) = (0, 1, 2);
    let anchor_ids: Vec<NodeId> = (3..7).collect();
    let mut edges = vec![(a, b), (b, c)];
    let mut next = 7;
    for (node, coords) in ABC_COORDS.iter().enumerate() {
        for (k, &hops) in coords.iter().enumerate() {
            let mut prev = node;
            for _ in 1..hops {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, anchor_ids[k]));
        }
    }
    let n = next;
    let positions = (0..n).map(|i| Point::new(i as f64 + 0.5, 0.5)).collect();
    let deployment = Deployment::new(positions, n as f64, 1.0).expect("positions inside bounds");
    let topology = Topology::from_edges(deployment, 1.0, &edges).expect("valid edges");
    let anchors = AnchorSet::new(anchor_ids).expect("four distinct anchors");
    let vcs = build_vcs(&topology, &anchors).expect("connected fixture");
    for (node, coords) in ABC_COORDS.iter().enumerate() {
        assert_eq!(vcs.of(node), coords, "fixture realizes the listed coordinates");
    }
    AbcFixture {
        topology,
        vcs,
        anchors,
        a,
        b,
        c,
    }
}

/// U-shaped corridor at radio range 1 with a one-node dead end at the source.
pub struct UShapeFixture {
    pub topology: Topology<f64>,
    pub src: NodeId,
    pub dst: NodeId,
}

/// Greedy from `src` = (0, 0) toward `dst` = (3, 0) walks into the dead end (1, 0)
/// and has to go around the U to reach the destination.
pub fn u_shape() -> UShapeFixture {
    let coords = [
        (0.0, 0.0),
        (1.0, 0.0),
        (0.0, 1.0),
        (0.0, 2.0),
        (0.0, 3.0),
        (1.0, 3.0),
        (2.0, 3.0),
        (3.0, 3.0),
        (3.0, 2.0),
        (3.0, 1.0),
        (3.0, 0.0),
        (4.0, 3.0),
    ];
    let positions = coords.iter().map(|&(x, y)| Point::new(x, y)).collect();
    let deployment = Deployment::new(positions, 4.0, 3.0).expect("positions inside bounds");
    let topology = crate::topology::build_udg(&deployment, 1.0).expect("positive range");
    UShapeFixture {
        topology,
        src: 0,
        dst: 10,
    }
}

/// Radio range of the 20x20 distance-map grid; dense enough for hop-count collisions.
pub const MINIMA_RANGE: f64 = 2.5;

pub const MINIMA_SIDE: usize = 20;

/// Void-free 20x20 grid with unit spacing.
pub fn minima_grid() -> Deployment<f64> {
    let side = NonZeroUsize::new(MINIMA_SIDE).expect("non-zero");
    generate_grid(side, side, 1.0)
}

/// Destination cell (2, 8) of the distance-map example.
pub fn minima_destination() -> NodeId {
    grid_node_id(MINIMA_SIDE, 2, 8)
}

/// A node with no raw-VCS neighbour closer to [`minima_destination`] under the Euclidean distance.
pub fn minima_stuck_source() -> NodeId {
    grid_node_id(MINIMA_SIDE, 1, 7)
}

/// Destination (2, 5) on the same grid, whose raw-VCS greedy routes can stall
/// away from it.
pub fn stranded_destination() -> NodeId {
    grid_node_id(MINIMA_SIDE, 2, 5)
}

/// Node (4, 3): a raw-VCS local minimum for [`stranded_destination`] that is not
/// its radio neighbour, so knowing neighbour ids does not rescue the packet.
pub fn stranded_source() -> NodeId {
    grid_node_id(MINIMA_SIDE, 4, 3)
}

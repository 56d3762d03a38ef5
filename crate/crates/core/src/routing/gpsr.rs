use crate::coords::GeoCoords;
use crate::geom::{ccw_sweep, segment_intersection, Point};
use crate::scalar::Scalar;
use crate::topology::{NodeId, Topology};

use super::{best_closer, FailureCause, GeoMetric, HopMode, PlanarGraph, RouteResult, Trace};

/// Face-walk state kept while in perimeter mode.
struct Perimeter<T> {
    /// Position where perimeter mode was entered.
    entry: Point<T>,
    /// Point on the entry-destination segment where the current face was entered.
    face_entry: Point<T>,
    /// First edge walked on the current face.
    first_edge: (NodeId, NodeId),
}

/// Planar neighbour reached first when sweeping counterclockwise from `from`; ties by id.
fn first_ccw<T: Scalar>(cur: NodeId, from: T, pg: &PlanarGraph, geo: &GeoCoords<T>) -> Option<NodeId> {
    let here = geo.of(cur);
    let mut best: Option<(T, NodeId)> = None;
    for &v in pg.neighbors(cur) {
        let sweep = ccw_sweep(from, here.bearing_to(&geo.of(v)));
        if best.is_none_or(|(s, _)| sweep < s) {
            best = Some((sweep, v));
        }
    }
    best.map(|(_, v)| v)
}

/// Rotates `next` past edges that cross the entry-destination segment closer to the
/// destination than the current face entry. Returns whether the face changed.
fn change_faces<T: Scalar>(
    cur: NodeId,
    next: &mut NodeId,
    state: &mut Perimeter<T>,
    dst: Point<T>,
    pg: &PlanarGraph,
    geo: &GeoCoords<T>,
) -> bool {
    let here = geo.of(cur);
    let mut changed = false;
    for _ in 0..=pg.neighbors(cur).len() {
        let Some(hit) = segment_intersection(&here, &geo.of(*next), &state.entry, &dst) else {
            break;
        };
        if hit.dist(&dst) >= state.face_entry.dist(&dst) {
            break;
        }
        state.face_entry = hit;
        let bearing = here.bearing_to(&geo.of(*next));
        *next = first_ccw(cur, bearing, pg, geo).expect("cur has at least the edge being rotated");
        state.first_edge = (cur, *next);
        changed = true;
    }
    changed
}

/// Greedy geographic forwarding with right-hand-rule face traversal around voids.
///
/// Greedy steps use every radio neighbour; perimeter steps use only `pg` edges.
/// `geo` is the position source for both, so it should be the one `pg` was built from.
pub fn gpsr_route<T: Scalar>(
    src: NodeId,
    dst: NodeId,
    geo: &GeoCoords<T>,
    pg: &PlanarGraph,
    t: &Topology<T>,
    ttl: usize,
) -> RouteResult {
    let metric = GeoMetric::new(geo);
    let target = geo.of(dst);
    let mut trace = Trace::new(src, dst, ttl);
    let mut perimeter: Option<Perimeter<T>> = None;
    let mut prev = src;

    loop {
        let cur = trace.current();
        if cur == dst {
            return trace.delivered();
        }
        let here = geo.of(cur);

        if let Some(state) = &perimeter {
            if here.dist(&target) < state.entry.dist(&target) {
                perimeter = None;
            }
        }

        let (next, mode) = match perimeter.as_mut() {
            None => match best_closer(cur, dst, &metric, t.neighbors(cur)) {
                Some(next) => (next, HopMode::Greedy),
                None => {
                    let Some(mut next) = first_ccw(cur, here.bearing_to(&target), pg, geo) else {
                        return trace.failed(FailureCause::LocalMinimum);
                    };
                    let mut state = Perimeter {
                        entry: here,
                        face_entry: here,
                        first_edge: (cur, next),
                    };
                    change_faces(cur, &mut next, &mut state, target, pg, geo);
                    perimeter = Some(state);
                    (next, HopMode::Perimeter)
                }
            },
            Some(state) => {
                let Some(mut next) = first_ccw(cur, here.bearing_to(&geo.of(prev)), pg, geo) else {
                    return trace.failed(FailureCause::PerimeterLoop);
                };
                let changed = change_faces(cur, &mut next, state, target, pg, geo);
                if !changed && (cur, next) == state.first_edge {
                    return trace.failed(FailureCause::PerimeterLoop);
                }
                (next, HopMode::Perimeter)
            }
        };

        if !trace.can_hop() {
            return trace.failed(FailureCause::TtlExceeded);
        }
        prev = cur;
        trace.push(next, mode);
    }
}

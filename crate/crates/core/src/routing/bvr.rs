use crate::coords::{AnchorSet, VirtualCoords};
use crate::scalar::Scalar;
use crate::topology::{NodeId, Topology};

use super::{best_closer, FailureCause, HopMode, ProgressMetric, RouteResult, Trace};

/// Index of the anchor the destination is closest to, in hops; ties by index.
pub fn beacon_for(vcs: &VirtualCoords, dst: NodeId) -> usize {
    let coords = vcs.of(dst);
    (0..coords.len()).min_by_key(|&k| (coords[k], k)).expect("at least one anchor")
}

/// Neighbour one hop closer to anchor `k` (lowest id).
fn step_toward(vcs: &VirtualCoords, t: &Topology<impl Scalar>, cur: NodeId, k: usize) -> Option<NodeId> {
    let level = vcs.of(cur)[k].checked_sub(1)?;
    t.neighbors(cur).iter().copied().find(|&v| vcs.of(v)[k] == level)
}

/// Greedy forwarding that falls back to the destination's nearest beacon.
///
/// At a local minimum the packet remembers its best distance and climbs the
/// hop gradient toward the beacon. It resumes greedy as soon as it stands on,
/// or next to, a node closer than that best distance, or next to the destination. A packet that reaches
/// the beacon is delivered by a scoped flood of radius `V(dst)_k`; the hops
/// charged are those of the shortest beacon-to-destination path.
pub fn bvr_route<T: Scalar, M: ProgressMetric<T> + ?Sized>(
    src: NodeId,
    dst: NodeId,
    metric: &M,
    t: &Topology<T>,
    vcs: &VirtualCoords,
    anchors: &AnchorSet,
    ttl: usize,
) -> RouteResult {
    let k = beacon_for(vcs, dst);
    let beacon = anchors.ids()[k];
    let mut trace = Trace::new(src, dst, ttl);
    // Best distance reached before the current fallback, if falling back.
    let mut fallback: Option<T> = None;

    loop {
        let cur = trace.current();
        if cur == dst {
            return trace.delivered();
        }
        if let Some(best) = fallback {
            let here = metric.distance(cur, dst);
            let resumable = here < best
                || t.are_adjacent(cur, dst)
                || t.neighbors(cur).iter().any(|&v| metric.distance(v, dst) < best);
            if resumable {
                fallback = None;
            }
        }

        let (next, mode) = match fallback {
            None => match best_closer(cur, dst, metric, t.neighbors(cur)) {
                Some(next) => (next, HopMode::Greedy),
                None => {
                    fallback = Some(metric.distance(cur, dst));
                    continue;
                }
            },
            Some(_) if cur == beacon => return flood(trace, t, vcs, beacon, k),
            Some(_) => match step_toward(vcs, t, cur, k) {
                Some(next) => (next, HopMode::BeaconFallback),
                None => return trace.failed(FailureCause::LocalMinimum),
            },
        };

        if !trace.can_hop() {
            return trace.failed(FailureCause::TtlExceeded);
        }
        trace.push(next, mode);
    }
}

fn flood<T: Scalar>(mut trace: Trace, t: &Topology<T>, vcs: &VirtualCoords, beacon: NodeId, k: usize) -> RouteResult {
    let dst = trace.dst;
    let radius = vcs.of(dst)[k] as usize;
    // Walk down the gradient from the destination and charge the reversed walk.
    let mut walk = vec![dst];
    let mut cur = dst;
    while cur != beacon {
        match step_toward(vcs, t, cur, k) {
            Some(next) if walk.len() <= radius => {
                walk.push(next);
                cur = next;
            }
            _ => return trace.failed(FailureCause::FloodMiss),
        }
    }
    for &node in walk.iter().rev().skip(1) {
        if !trace.can_hop() {
            return trace.failed(FailureCause::TtlExceeded);
        }
        trace.push(node, HopMode::Flood);
    }
    trace.delivered()
}

use std::collections::HashSet;

use crate::scalar::Scalar;
use crate::topology::{NodeId, Topology};

use super::{FailureCause, HopMode, ProgressMetric, RouteResult, Trace};

/// Depth-first greedy search with per-packet visited set and backtracking.
///
/// At every node the packet moves to the destination if it is a neighbour,
/// else to the unvisited neighbour closest to the destination (ties by id). The hop is greedy when that neighbour is strictly
/// closer than the current node, otherwise it is a backtrack hop. With no
/// unvisited neighbour left the packet returns to the node it came from.
/// The search visits the whole component, so delivery only fails on TTL or
/// an unreachable destination.
pub fn lcr_route<T: Scalar, M: ProgressMetric<T> + ?Sized>(
    src: NodeId,
    dst: NodeId,
    metric: &M,
    t: &Topology<T>,
    ttl: usize,
) -> RouteResult {
    let mut trace = Trace::new(src, dst, ttl);
    let mut visited = HashSet::from([src]);
    let mut stack = vec![src];

    loop {
        let cur = trace.current();
        if cur == dst {
            return trace.delivered();
        }
        let candidate = if t.are_adjacent(cur, dst) {
            Some((metric.distance(dst, dst), dst))
        } else {
            t.neighbors(cur)
                .iter()
                .copied()
                .filter(|v| !visited.contains(v))
                .map(|v| (metric.distance(v, dst), v))
                .min_by(|a, b| a.0.partial_cmp(&b.0).expect("distances are finite").then(a.1.cmp(&b.1)))
        };

        let (next, mode) = match candidate {
            Some((d, v)) => {
                let mode = if v == dst || d < metric.distance(cur, dst) {
                    HopMode::Greedy
                } else {
                    HopMode::Backtrack
                };
                (v, mode)
            }
            None => {
                stack.pop();
                match stack.last() {
                    Some(&parent) => (parent, HopMode::Backtrack),
                    None => return trace.failed(FailureCause::BacktrackExhausted),
                }
            }
        };

        if !trace.can_hop() {
            return trace.failed(FailureCause::TtlExceeded);
        }
        if visited.insert(next) {
            stack.push(next);
        }
        trace.push(next, mode);
    }
}

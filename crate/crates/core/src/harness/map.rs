//! Per-node distance to one destination, for plotting voids.

use std::fmt::Write as _;

use crate::routing::forwarding_set;
use crate::topology::NodeId;

use super::scenario::Scenario;
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapEntry {
    pub x: f64,
    pub y: f64,
    pub dist: f64,
    pub is_local_min: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMap {
    pub dst: NodeId,
    pub entries: Vec<MapEntry>,
}

impl DistanceMap {
    /// Nodes other than the destination with no neighbour closer to it.
    pub fn local_minima(&self) -> Vec<NodeId> {
        (0..self.entries.len()).filter(|&i| self.entries[i].is_local_min).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,dist,is_local_min\n");
        for e in &self.entries {
            let _ = writeln!(out, "{:.6},{:.6},{:.6},{}", e.x, e.y, e.dist, u8::from(e.is_local_min));
        }
        out
    }
}

/// Distance of every node to `dst` under the scenario's progress metric: planar
/// distance for geographic protocols, otherwise the configured distance from
/// (aligned) local coordinates to the destination's integer coordinates.
pub fn distance_map(sc: &Scenario, dst: NodeId) -> Result<DistanceMap, HarnessError> {
    if dst >= sc.len() {
        return Err(HarnessError::Invalid(format!("node {dst} out of range (network has {} nodes)", sc.len())));
    }
    let metric = sc.progress_metric();
    let metric = metric.as_ref();
    let t = &sc.topology;
    let entries = (0..sc.len())
        .map(|u| {
            let p = t.position(u);
            MapEntry {
                x: p.x,
                y: p.y,
                dist: metric.distance(u, dst),
                is_local_min: u != dst && forwarding_set(u, dst, metric, t).is_empty(),
            }
        })
        .collect();
    Ok(DistanceMap { dst, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::harness::config::parse_config;

    fn grid_map(protocol: &str, depth: u32) -> DistanceMap {
        let cfg = parse_config(&format!(
            "rows = 20\ncols = 20\nradio_range = {}\nprotocol = {protocol}\nalign_depth = {depth}",
            fixtures::MINIMA_RANGE
        ))
        .unwrap();
        distance_map(&Scenario::build(&cfg).unwrap(), fixtures::minima_destination()).unwrap()
    }

    #[test]
    fn raw_vcs_has_a_void_that_alignment_removes() {
        let raw = grid_map("gf-vcs", 0);
        assert!(raw.local_minima().contains(&fixtures::minima_stuck_source()));
        assert!(grid_map("gf-avcs", 1).local_minima().is_empty());
    }

    #[test]
    fn destination_is_the_only_zero() {
        let m = grid_map("gf-avcs", 1);
        assert_eq!(m.entries.len(), 400);
        assert_eq!(m.entries.iter().filter(|e| e.dist == 0.0).count(), 1);
        assert_eq!(m.entries[fixtures::minima_destination()].dist, 0.0);
        let csv = m.to_csv();
        assert_eq!(csv.lines().count(), 401);
        assert_eq!(csv.lines().next(), Some("x,y,dist,is_local_min"));
    }
}

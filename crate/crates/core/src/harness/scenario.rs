//! Turns a [`ScenarioConfig`] into the immutable state routes run against.

use std::collections::VecDeque;
use std::num::NonZeroUsize;

use rayon::prelude::*;

use crate::coords::{align, build_vcs, geo_view, AlignedCoords, AnchorSet, GeoCoords, VirtualCoords};
use crate::distance::DistanceFunction;
use crate::geom::Point;
use crate::routing::{planarize, GeoMetric, PlanarGraph, ProgressMetric, Protocol, RoutingContext, VirtualMetric};
use crate::topology::{
    build_udg, carve_voids, disc_radius_removing, generate_grid, generate_random, perturb_positions,
    range_for_mean_degree, Deployment, NodeId, PerceivedPositions, Topology, TopologyError, VoidSpec,
};

use super::config::{AnchorSpec, DeploymentSpec, RangeSpec, ScenarioConfig, VoidLayout};
use super::HarnessError;

/// Everything a scenario's routes read, built once.
///
/// Only the largest connected component is kept; node ids below refer to it.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub topology: Topology<f64>,
    /// Original (pre-restriction) id of every kept node.
    pub original_ids: Vec<NodeId>,
    /// Nodes removed by voids.
    pub carved: usize,
    /// Nodes dropped because they sit outside the largest component.
    pub excluded_nodes: usize,
    pub perceived: Option<PerceivedPositions<f64>>,
    pub geo: GeoCoords<f64>,
    pub anchors: AnchorSet,
    pub vcs: VirtualCoords,
    pub aligned: AlignedCoords<f64>,
    pub planar: Option<PlanarGraph>,
    pub distance: DistanceFunction<f64>,
    pub diameter: usize,
    pub ttl: usize,
}

/// Centres for `count` equal holes in a `width x height` area.
pub fn hole_centers(count: usize, width: f64, height: f64) -> Vec<Point<f64>> {
    if count == 5 {
        let (qx, qy) = (width / 4.0, height / 4.0);
        return vec![
            Point::new(qx, qy),
            Point::new(3.0 * qx, qy),
            Point::new(2.0 * qx, 2.0 * qy),
            Point::new(qx, 3.0 * qy),
            Point::new(3.0 * qx, 3.0 * qy),
        ];
    }
    let side = (count as f64).sqrt().ceil() as usize;
    (0..count)
        .map(|i| {
            let (cx, cy) = (i % side, i / side);
            Point::new(
                (cx as f64 + 0.5) * width / side as f64,
                (cy as f64 + 0.5) * height / side as f64,
            )
        })
        .collect()
}

/// Deployment after voids are carved, with the number of removed nodes.
pub fn build_deployment(cfg: &ScenarioConfig) -> Result<(Deployment<f64>, usize), HarnessError> {
    let base = match cfg.deployment {
        DeploymentSpec::Grid { rows, cols, spacing } => {
            let nz = |v: usize| NonZeroUsize::new(v).ok_or(HarnessError::Invalid("grid sides must be positive".into()));
            generate_grid(nz(rows)?, nz(cols)?, spacing)
        }
        DeploymentSpec::Random { n, width, height } => {
            let n = NonZeroUsize::new(n).ok_or(HarnessError::Invalid("node count must be positive".into()))?;
            generate_random(n, width, height, cfg.seed)
        }
    };
    let regions: Vec<VoidSpec<f64>> = match cfg.voids {
        VoidLayout::Regions(ref r) => r.clone(),
        VoidLayout::RemoveCentral(0) => Vec::new(),
        VoidLayout::RemoveCentral(k) => {
            let center = base
                .nearest_node(&base.center())
                .map(|id| base.position(id))
                .ok_or(HarnessError::Invalid("empty deployment".into()))?;
            let radius = disc_radius_removing(&base, &center, k).ok_or(TopologyError::UnreachableRemovalCount(k))?;
            vec![VoidSpec::Disc { center, radius }]
        }
        VoidLayout::Holes { count, radius } => hole_centers(count, base.width(), base.height())
            .into_iter()
            .map(|center| VoidSpec::Disc { center, radius })
            .collect(),
    };
    let (carved, removed) = carve_voids(&base, &regions)?;
    if carved.is_empty() {
        return Err(HarnessError::Invalid("voids remove every node".into()));
    }
    Ok((carved, removed))
}

/// Exact hop diameter of a connected topology (one BFS per node, in parallel).
pub fn diameter(t: &Topology<f64>) -> usize {
    (0..t.len())
        .into_par_iter()
        .map(|s| {
            let mut dist = vec![usize::MAX; t.len()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            let mut far = 0;
            while let Some(u) = queue.pop_front() {
                far = dist[u];
                for &v in t.neighbors(u) {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            far
        })
        .max()
        .unwrap_or(0)
}

impl Scenario {
    pub fn build(config: &ScenarioConfig) -> Result<Self, HarnessError> {
        let (deployment, carved) = build_deployment(config)?;
        let range = match config.radio_range {
            RangeSpec::Absolute(r) => r,
            RangeSpec::MeanDegree(target) => range_for_mean_degree(&deployment, target)?,
        };
        let full = build_udg(&deployment, range)?;
        Self::assemble(config, full, carved)
    }

    /// Scenario over a given topology (for example one read back from a
    /// topology file); deployment, range and void settings are ignored.
    pub fn with_topology(config: &ScenarioConfig, topology: Topology<f64>) -> Result<Self, HarnessError> {
        Self::assemble(config, topology, 0)
    }

    fn assemble(config: &ScenarioConfig, full: Topology<f64>, carved: usize) -> Result<Self, HarnessError> {
        let total = full.len();
        let (topology, original_ids) = if full.is_connected() {
            let ids = (0..full.len()).collect();
            (full, ids)
        } else {
            full.largest_component()
        };
        let excluded_nodes = total - topology.len();

        let perceived = if config.loc_error > 0.0 {
            Some(perturb_positions(&topology, config.loc_error, config.seed)?)
        } else {
            None
        };
        let geo = geo_view(&topology, perceived.as_ref());

        let anchors = match &config.anchors {
            AnchorSpec::Corners => AnchorSet::corners(topology.deployment(), config.dims)?,
            AnchorSpec::Explicit(ids) => {
                let mapped = ids
                    .iter()
                    .map(|&old| {
                        original_ids
                            .binary_search(&old)
                            .map_err(|_| HarnessError::Invalid(format!("anchor {old} is not in the evaluated component")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                AnchorSet::new(mapped)?
            }
        };
        let vcs = build_vcs(&topology, &anchors)?;
        let aligned = align(&vcs, &topology, config.effective_depth(), config.align_rule);
        let planar = config
            .protocol
            .planar_method()
            .map(|m| planarize(&topology, geo.points(), m));
        let diameter = diameter(&topology);
        let ttl = config.ttl_factor * diameter.max(1);

        Ok(Self {
            config: config.clone(),
            topology,
            original_ids,
            carved,
            excluded_nodes,
            perceived,
            geo,
            anchors,
            vcs,
            aligned,
            planar,
            distance: config.distance_function(),
            diameter,
            ttl,
        })
    }

    pub fn len(&self) -> usize {
        self.topology.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topology.is_empty()
    }

    pub fn metric(&self) -> VirtualMetric<'_, f64> {
        VirtualMetric::new(&self.aligned, &self.vcs, self.distance).expect("coordinates share the anchor set")
    }

    /// Coordinate system label used in reports.
    pub fn coord_system(&self) -> &'static str {
        match self.config.protocol {
            Protocol::GreedyGeo | Protocol::GpsrGabriel | Protocol::GpsrRng => "geo",
            Protocol::ShortestPath => "hop",
            _ if self.aligned.depth() == 0 => "vcs",
            _ => "avcs",
        }
    }

    /// Name of the progress distance the protocol uses.
    pub fn distance_name(&self) -> &'static str {
        match self.coord_system() {
            "geo" => "geo",
            "hop" => "hop",
            _ => self.distance.name(),
        }
    }

    /// Distance the protocol's greedy mode makes progress on: planar distance
    /// for geographic protocols, otherwise the virtual metric.
    pub fn progress_metric(&self) -> Box<dyn ProgressMetric<f64> + '_> {
        if self.coord_system() == "geo" {
            Box::new(GeoMetric::new(&self.geo))
        } else {
            Box::new(self.metric())
        }
    }

    pub fn context(&self) -> RoutingContext<'_, f64> {
        RoutingContext {
            topology: &self.topology,
            geo: &self.geo,
            planar: self.planar.as_ref(),
            metric: Some(self.metric()),
            vcs: Some(&self.vcs),
            anchors: Some(&self.anchors),
            ttl: self.ttl,
        }
    }
}

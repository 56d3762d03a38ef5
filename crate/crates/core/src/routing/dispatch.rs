use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coords::{AnchorSet, GeoCoords, VirtualCoords};
use crate::scalar::Scalar;
use crate::topology::{NodeId, Topology};

use super::{
    bvr_route, gpsr_route, greedy_route, lcr_route, sp_route, FailureCause, GeoMetric, PlanarGraph, PlanarMethod,
    RouteResult, Trace, VirtualMetric,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoutingError {
    #[error("unknown protocol `{0}` (expected gf-geo, gpsr-gg, gpsr-rng, gf-vcs, gf-avcs, lcr, bvr or sp)")]
    UnknownProtocol(String),
    #[error("node {node} out of range (network has {len} nodes)")]
    NodeOutOfRange { node: NodeId, len: usize },
    #[error("protocol {protocol} needs {what}")]
    MissingInput { protocol: Protocol, what: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Protocol {
    GreedyGeo,
    GpsrGabriel,
    GpsrRng,
    GreedyVcs,
    GreedyAvcs,
    Lcr,
    Bvr,
    ShortestPath,
}

impl Protocol {
    pub const ALL: [Protocol; 8] = [
        Protocol::GreedyGeo,
        Protocol::GpsrGabriel,
        Protocol::GpsrRng,
        Protocol::GreedyVcs,
        Protocol::GreedyAvcs,
        Protocol::Lcr,
        Protocol::Bvr,
        Protocol::ShortestPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::GreedyGeo => "gf-geo",
            Protocol::GpsrGabriel => "gpsr-gg",
            Protocol::GpsrRng => "gpsr-rng",
            Protocol::GreedyVcs => "gf-vcs",
            Protocol::GreedyAvcs => "gf-avcs",
            Protocol::Lcr => "lcr",
            Protocol::Bvr => "bvr",
            Protocol::ShortestPath => "sp",
        }
    }

    /// Whether the protocol forwards on virtual coordinates.
    pub fn uses_virtual_coords(self) -> bool {
        matches!(
            self,
            Protocol::GreedyVcs | Protocol::GreedyAvcs | Protocol::Lcr | Protocol::Bvr
        )
    }

    pub fn planar_method(self) -> Option<PlanarMethod> {
        match self {
            Protocol::GpsrGabriel => Some(PlanarMethod::Gabriel),
            Protocol::GpsrRng => Some(PlanarMethod::RelativeNeighborhood),
            _ => None,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = RoutingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| RoutingError::UnknownProtocol(s.to_string()))
    }
}

/// Scenario state a route may read. Inputs a protocol does not use may be absent.
#[derive(Clone, Copy)]
pub struct RoutingContext<'a, T> {
    pub topology: &'a Topology<T>,
    pub geo: &'a GeoCoords<T>,
    pub planar: Option<&'a PlanarGraph>,
    pub metric: Option<VirtualMetric<'a, T>>,
    pub vcs: Option<&'a VirtualCoords>,
    pub anchors: Option<&'a AnchorSet>,
    pub ttl: usize,
}

impl<'a, T: Scalar> RoutingContext<'a, T> {
    pub fn new(topology: &'a Topology<T>, geo: &'a GeoCoords<T>, ttl: usize) -> Self {
        Self {
            topology,
            geo,
            planar: None,
            metric: None,
            vcs: None,
            anchors: None,
            ttl,
        }
    }
}

fn need<U>(value: Option<U>, protocol: Protocol, what: &'static str) -> Result<U, RoutingError> {
    value.ok_or(RoutingError::MissingInput { protocol, what })
}

/// Routes one packet with `protocol`. Pairs in different components fail as unreachable.
pub fn route<T: Scalar>(
    protocol: Protocol,
    src: NodeId,
    dst: NodeId,
    ctx: &RoutingContext<'_, T>,
) -> Result<RouteResult, RoutingError> {
    let t = ctx.topology;
    for node in [src, dst] {
        if node >= t.len() {
            return Err(RoutingError::NodeOutOfRange { node, len: t.len() });
        }
    }
    if !t.same_component(src, dst) {
        return Ok(Trace::new(src, dst, ctx.ttl).failed(FailureCause::Unreachable));
    }
    let result = match protocol {
        Protocol::GreedyGeo => greedy_route(src, dst, &GeoMetric::new(ctx.geo), t, ctx.ttl),
        Protocol::GpsrGabriel | Protocol::GpsrRng => {
            let pg = need(ctx.planar, protocol, "a planar graph")?;
            let wanted = protocol.planar_method().expect("gpsr variant");
            if pg.method() != wanted {
                return Err(RoutingError::MissingInput {
                    protocol,
                    what: "a planar graph of the matching method",
                });
            }
            gpsr_route(src, dst, ctx.geo, pg, t, ctx.ttl)
        }
        Protocol::GreedyVcs | Protocol::GreedyAvcs => {
            let m = need(ctx.metric, protocol, "virtual coordinates")?;
            greedy_route(src, dst, &m, t, ctx.ttl)
        }
        Protocol::Lcr => {
            let m = need(ctx.metric, protocol, "virtual coordinates")?;
            lcr_route(src, dst, &m, t, ctx.ttl)
        }
        Protocol::Bvr => {
            let m = need(ctx.metric, protocol, "virtual coordinates")?;
            let vcs = need(ctx.vcs, protocol, "virtual coordinates")?;
            let anchors = need(ctx.anchors, protocol, "anchors")?;
            bvr_route(src, dst, &m, t, vcs, anchors, ctx.ttl)
        }
        Protocol::ShortestPath => sp_route(src, dst, t),
    };
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{align, build_vcs, geo_view, AlignRule};
    use crate::distance::DistanceFunction;
    use crate::fixtures;
    use crate::routing::Outcome;
    use crate::topology::build_udg;

    #[test]
    fn names_round_trip() {
        for p in Protocol::ALL {
            assert_eq!(p.name().parse::<Protocol>().unwrap(), p);
        }
        assert!(matches!("ospf".parse::<Protocol>(), Err(RoutingError::UnknownProtocol(_))));
    }

    #[test]
    fn sp_to_self_is_zero_hops() {
        let fx = fixtures::u_shape();
        let geo = geo_view(&fx.topology, None);
        let ctx = RoutingContext::new(&fx.topology, &geo, 100);
        assert_eq!(route(Protocol::ShortestPath, 5, 5, &ctx).unwrap().hops(), 0);
    }

    #[test]
    fn missing_inputs_are_errors() {
        let fx = fixtures::u_shape();
        let geo = geo_view(&fx.topology, None);
        let ctx = RoutingContext::new(&fx.topology, &geo, 100);
        for p in [Protocol::GpsrGabriel, Protocol::GreedyVcs, Protocol::Bvr] {
            assert!(matches!(route(p, 0, 1, &ctx), Err(RoutingError::MissingInput { .. })));
        }
        assert!(matches!(
            route(Protocol::GreedyGeo, 0, 99, &ctx),
            Err(RoutingError::NodeOutOfRange { .. })
        ));
    }

    #[test]
    fn alignment_repairs_a_stranded_pair() {
        let t = build_udg(&fixtures::minima_grid(), fixtures::MINIMA_RANGE).unwrap();
        let anchors = AnchorSet::corners(t.deployment(), 4).unwrap();
        let vcs = build_vcs(&t, &anchors).unwrap();
        let geo = geo_view(&t, None);
        let dst = fixtures::stranded_destination();
        let raw = align(&vcs, &t, 0, AlignRule::UniformAverage);
        let aligned = align(&vcs, &t, 1, AlignRule::UniformAverage);
        let src = fixtures::stranded_source();

        let mut ctx = RoutingContext::new(&t, &geo, 1000);
        ctx.metric = Some(VirtualMetric::new(&raw, &vcs, DistanceFunction::Euclidean).unwrap());
        let r = route(Protocol::GreedyVcs, src, dst, &ctx).unwrap();
        assert_eq!(r.failure_cause(), Some(FailureCause::LocalMinimum));
        assert_eq!(r.path, vec![src]);

        ctx.metric = Some(VirtualMetric::new(&aligned, &vcs, DistanceFunction::Euclidean).unwrap());
        let r = route(Protocol::GreedyAvcs, src, dst, &ctx).unwrap();
        assert_eq!(r.outcome, Outcome::DeliveredGreedy);
    }
}

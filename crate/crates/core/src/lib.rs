//! Deterministic simulator for greedy routing in wireless sensor networks.
//!
//! Geographic, hop-count virtual (VCS) and aligned virtual (AVCS) coordinates,
//! greedy forwarding with the GPSR, LCR and BVR recovery modes, a shortest-path
//! baseline, and a harness that reports greedy ratio and path stretch.
//!
//! The core is generic over the scalar type (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the harness and CLI use.

pub mod coords;
pub mod distance;
pub mod fixtures;
pub mod geom;
pub mod harness;
pub mod routing;
pub mod scalar;
pub mod topology;

pub use scalar::Scalar;
pub use topology::NodeId;

pub type Point = geom::Point<f64>;
pub type Deployment = topology::Deployment<f64>;
pub type Topology = topology::Topology<f64>;
pub type VoidSpec = topology::VoidSpec<f64>;
pub type PerceivedPositions = topology::PerceivedPositions<f64>;
pub type AlignedCoords = coords::AlignedCoords<f64>;
pub type GeoCoords = coords::GeoCoords<f64>;
pub type DistanceFunction = distance::DistanceFunction<f64>;

/// Single-precision variants of the aliases above.
pub mod f32 {
    pub type Point = crate::geom::Point<f32>;
    pub type Deployment = crate::topology::Deployment<f32>;
    pub type Topology = crate::topology::Topology<f32>;
    pub type AlignedCoords = crate::coords::AlignedCoords<f32>;
    pub type GeoCoords = crate::coords::GeoCoords<f32>;
    pub type DistanceFunction = crate::distance::DistanceFunction<f32>;
}

//! End-to-end scenario execution: build, evaluate, sweep and export.

mod config;
mod map;
mod metrics;
mod scenario;
mod sweep;

use thiserror::Error;

use crate::coords::CoordError;
use crate::routing::RoutingError;
use crate::topology::TopologyError;

pub use config::{parse_config, AnchorSpec, ConfigError, DeploymentSpec, RangeSpec, ScenarioConfig, VoidLayout};
pub use map::{distance_map, DistanceMap, MapEntry};
pub use metrics::{evaluate, metrics_csv, select_pairs, MetricsRow, METRICS_HEADER};
pub use scenario::{build_deployment, diameter, hole_centers, Scenario};
pub use sweep::{apply, sweep, sweep_csv, SweepAxis, SweepPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Coords(#[from] CoordError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error("{0}")]
    Invalid(String),
}

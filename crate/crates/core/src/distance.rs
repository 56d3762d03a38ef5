//! Distance from a node's local coordinates to the destination's advertised coordinates.
//!
//! The virtual-coordinate distances compare real-valued (possibly aligned)
//! local coordinates against the destination's integer hop-count vector,
//! which is all a packet carries.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geom::Point;
use crate::scalar::Scalar;

/// Weight on overshoot used by the semi-Manhattan distance unless configured.
pub const DEFAULT_SEMI_WEIGHT: f64 = 10.0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistanceError {
    #[error("coordinate dimension mismatch: local {local}, destination {destination}")]
    DimensionMismatch { local: usize, destination: usize },
    #[error("unknown distance `{0}` (expected euclid, manhattan, semi or geo)")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceFunction<T> {
    Euclidean,
    Manhattan,
    /// Overshoot above the destination's coordinate is weighted by `weight`.
    SemiManhattan { weight: T },
    PlanarEuclidean,
}

impl<T: Scalar> DistanceFunction<T> {
    pub fn semi(weight: T) -> Self {
        DistanceFunction::SemiManhattan { weight }
    }

    /// Config-file name of the function.
    pub fn name(&self) -> &'static str {
        match self {
            DistanceFunction::Euclidean => "euclid",
            DistanceFunction::Manhattan => "manhattan",
            DistanceFunction::SemiManhattan { .. } => "semi",
            DistanceFunction::PlanarEuclidean => "geo",
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(self, DistanceFunction::PlanarEuclidean)
    }

    /// Virtual-coordinate distance. The planar variant treats the vectors as
    /// points in R^k and so coincides with [`euclidean_vcs`].
    pub fn vcs(&self, local: &[T], dst: &[u32]) -> Result<T, DistanceError> {
        match *self {
            DistanceFunction::Euclidean | DistanceFunction::PlanarEuclidean => euclidean_vcs(local, dst),
            DistanceFunction::Manhattan => manhattan_vcs(local, dst),
            DistanceFunction::SemiManhattan { weight } => semi_manhattan_vcs(local, dst, weight),
        }
    }
}

impl<T: Scalar> fmt::Display for DistanceFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl<T: Scalar> FromStr for DistanceFunction<T> {
    type Err = DistanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclid" | "euclidean" => Ok(DistanceFunction::Euclidean),
            "manhattan" => Ok(DistanceFunction::Manhattan),
            "semi" | "semi-manhattan" => Ok(DistanceFunction::semi(T::of(DEFAULT_SEMI_WEIGHT))),
            "geo" | "planar" => Ok(DistanceFunction::PlanarEuclidean),
            other => Err(DistanceError::Unknown(other.to_string())),
        }
    }
}

fn check(local: usize, destination: usize) -> Result<(), DistanceError> {
    if local != destination {
        return Err(DistanceError::DimensionMismatch { local, destination });
    }
    Ok(())
}

pub fn euclidean_vcs<T: Scalar>(av: &[T], v_dst: &[u32]) -> Result<T, DistanceError> {
    check(av.len(), v_dst.len())?;
    let sum: T = av
        .iter()
        .zip(v_dst)
        .map(|(&a, &d)| {
            let diff = a - T::of_u32(d);
            diff * diff
        })
        .sum();
    Ok(sum.sqrt())
}

pub fn manhattan_vcs<T: Scalar>(av: &[T], v_dst: &[u32]) -> Result<T, DistanceError> {
    check(av.len(), v_dst.len())?;
    Ok(av.iter().zip(v_dst).map(|(&a, &d)| (a - T::of_u32(d)).abs()).sum())
}

/// `weight * sum(max(av - dst, 0)) + sum(max(dst - av, 0))`
pub fn semi_manhattan_vcs<T: Scalar>(av: &[T], v_dst: &[u32], weight: T) -> Result<T, DistanceError> {
    check(av.len(), v_dst.len())?;
    let (mut over, mut under) = (T::zero(), T::zero());
    for (&a, &d) in av.iter().zip(v_dst) {
        let diff = a - T::of_u32(d);
        if diff > T::zero() {
            over = over + diff;
        } else {
            under = under - diff;
        }
    }
    Ok(weight * over + under)
}

pub fn planar_euclidean<T: Scalar>(p: &Point<T>, q: &Point<T>) -> T {
    p.dist(q)
}

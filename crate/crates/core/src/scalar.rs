//! Scalar abstraction shared by the geometric and coordinate code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating point scalar used for positions, ranges and aligned coordinates: `f32` or `f64`.
pub trait Scalar:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; used for generator output and config values.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every float scalar")
    }

    fn of_u32(v: u32) -> Self {
        Self::from_u32(v).expect("u32 is representable in every float scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("float scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

//! Planar points and the segment predicates used by planarization and face routing.

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn dist_sq(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: &Self) -> T {
        self.dist_sq(other).sqrt()
    }

    /// Direction of `other` seen from `self`, in radians in `(-pi, pi]`.
    pub fn bearing_to(&self, other: &Self) -> T {
        (other.y - self.y).atan2(other.x - self.x)
    }

    pub fn lerp(&self, other: &Self, t: T) -> Self {
        Self::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }
}

/// Twice the signed area of the triangle `a b c`; positive when counterclockwise.
pub fn orient<T: Scalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> T {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// True when segments `ab` and `cd` cross at a single point interior to both.
///
/// Shared endpoints, touching and collinear overlap do not count.
pub fn segments_cross<T: Scalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>, d: &Point<T>) -> bool {
    let zero = T::zero();
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    ((o1 > zero && o2 < zero) || (o1 < zero && o2 > zero))
        && ((o3 > zero && o4 < zero) || (o3 < zero && o4 > zero))
}

/// Intersection of segment `ab` (open at both ends) with segment `cd` (closed).
///
/// Returns `None` for parallel segments or when the crossing falls outside either range.
pub fn segment_intersection<T: Scalar>(
    a: &Point<T>,
    b: &Point<T>,
    c: &Point<T>,
    d: &Point<T>,
) -> Option<Point<T>> {
    let r = Point::new(b.x - a.x, b.y - a.y);
    let s = Point::new(d.x - c.x, d.y - c.y);
    let denom = r.x * s.y - r.y * s.x;
    if denom == T::zero() {
        return None;
    }
    let qp = Point::new(c.x - a.x, c.y - a.y);
    let t = (qp.x * s.y - qp.y * s.x) / denom;
    let u = (qp.x * r.y - qp.y * r.x) / denom;
    let (zero, one) = (T::zero(), T::one());
    if t > zero && t < one && u >= zero && u <= one {
        Some(a.lerp(b, t))
    } else {
        None
    }
}

/// Counterclockwise angle swept from direction `from` to direction `to`, in `(0, 2pi]`.
pub fn ccw_sweep<T: Scalar>(from: T, to: T) -> T {
    let two_pi = T::of(std::f64::consts::TAU);
    let mut delta = to - from;
    while delta <= T::zero() {
        delta = delta + two_pi;
    }
    while delta > two_pi {
        delta = delta - two_pi;
    }
    delta
}

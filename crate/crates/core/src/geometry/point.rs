use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Checked constructor rejecting NaN and infinite coordinates.
    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(Error::InvalidInput(format!("non-finite point ({x}, {y})")))
        }
    }

    #[inline]
    pub fn polar(r: f64, angle: f64) -> Self {
        Point::new(r * angle.cos(), r * angle.sin())
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Rotation by +90 degrees.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    /// Projection onto the horizontal axis (after normalization, the base line).
    #[inline]
    pub fn proj(self) -> f64 {
        self.x
    }

    /// Projection onto the orthogonal complement of the horizontal axis.
    #[inline]
    pub fn proj_perp(self) -> f64 {
        self.y
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Closed segment `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn dist_to(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        let len2 = d.norm2();
        if len2 == 0.0 {
            return p.dist(self.a);
        }
        let t = ((p - self.a).dot(d) / len2).clamp(0.0, 1.0);
        p.dist(self.a + d * t)
    }

    pub fn bbox(&self) -> (Point, Point) {
        (
            Point::new(self.a.x.min(self.b.x), self.a.y.min(self.b.y)),
            Point::new(self.a.x.max(self.b.x), self.a.y.max(self.b.y)),
        )
    }
}

/// Rigid motion `p -> rot(p - origin)` with rotation by `-angle`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub origin: Point,
    pub angle: f64,
}

impl Frame {
    pub fn identity() -> Self {
        Frame { origin: Point::default(), angle: 0.0 }
    }

    pub fn to_local(&self, p: Point) -> Point {
        let (s, c) = self.angle.sin_cos();
        let q = p - self.origin;
        Point::new(c * q.x + s * q.y, -s * q.x + c * q.y)
    }

    pub fn to_global(&self, q: Point) -> Point {
        let (s, c) = self.angle.sin_cos();
        Point::new(c * q.x - s * q.y, s * q.x + c * q.y) + self.origin
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(Point::try_new(f64::NAN, 0.0).is_err());
        assert!(Point::try_new(0.0, f64::INFINITY).is_err());
        assert!(Point::try_new(1.0, -2.0).is_ok());
    }

    #[test]
    fn segment_distance() {
        let s = Segment::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        assert_eq!(s.dist_to(Point::new(0.5, 2.0)), 2.0);
        assert_eq!(s.dist_to(Point::new(4.0, 4.0)), 5.0);
    }

    #[test]
    fn frame_roundtrip() {
        let f = Frame { origin: Point::new(1.0, -2.0), angle: 0.7 };
        let p = Point::new(3.0, 4.0);
        let q = f.to_global(f.to_local(p));
        assert!((p - q).norm() < 1e-14);
    }
}

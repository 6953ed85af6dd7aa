//! Minimum-width strip of a finite point set.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{PlanarDomain, Point};

/// Relative width tolerance under which two directions count as tied.
const TIE: f64 = 1e-12;

/// The centre line of a thinnest strip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripFit {
    /// Half of the strip width: the largest distance from a point to the centre line.
    pub half_width: f64,
    /// Direction angle of the line in `(−π/2, π/2]`.
    pub angle: f64,
    /// A point on the centre line.
    pub anchor: Point,
}

impl StripFit {
    pub fn direction(&self) -> Point {
        Point::new(self.angle.cos(), self.angle.sin())
    }

    /// Unit normal, rotated a quarter turn counter-clockwise from the direction.
    pub fn normal(&self) -> Point {
        self.direction().perp()
    }

    /// Unsigned angle with the horizontal axis, in `[0, π/2]`.
    pub fn angle_to_horizontal(&self) -> f64 {
        self.angle.abs()
    }

    /// `(slope, intercept)` of the line as a graph over the horizontal axis.
    pub fn as_affine(&self) -> (f64, f64) {
        let slope = self.angle.tan();
        (slope, self.anchor.y - slope * self.anchor.x)
    }

    pub fn dist(&self, p: Point) -> f64 {
        (p - self.anchor).dot(self.normal()).abs()
    }
}

/// `β∞` of a ball together with the achieving line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaFit {
    pub beta: f64,
    pub line: StripFit,
}

fn normalize_angle(mut a: f64) -> f64 {
    while a <= -PI / 2.0 {
        a += PI;
    }
    while a > PI / 2.0 {
        a -= PI;
    }
    a
}

/// Convex hull in counter-clockwise order without collinear vertices.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut p: Vec<Point> = points.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut hull: Vec<Point> = Vec::with_capacity(2 * p.len());
    for &q in &p {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
            hull.pop();
        }
        hull.push(q);
    }
    let lower = hull.len() + 1;
    for &q in p.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
            hull.pop();
        }
        hull.push(q);
    }
    hull.pop();
    hull
}

/// Exact minimum-width strip by rotating calipers over the hull edges.
/// Ties between directions go to the smallest angle with the horizontal.
pub fn min_width_strip(points: &[Point]) -> Option<StripFit> {
    let hull = convex_hull(points);
    match hull.len() {
        0 => return None,
        1 => return Some(StripFit { half_width: 0.0, angle: 0.0, anchor: hull[0] }),
        2 => {
            let d = hull[1] - hull[0];
            return Some(StripFit { half_width: 0.0, angle: normalize_angle(d.y.atan2(d.x)), anchor: hull[0] });
        }
        _ => {}
    }
    let n = hull.len();
    let scale = hull.iter().map(|p| (*p - hull[0]).norm()).fold(0.0, f64::max);
    let mut best: Option<(f64, f64, Point)> = None;
    let mut j = 1;
    for i in 0..n {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        let e = b - a;
        let len = e.norm();
        let height = |k: usize| e.cross(hull[k % n] - a) / len;
        while height(j + 1) >= height(j) && (j + 1) % n != i {
            j += 1;
        }
        let width = height(j);
        let angle = normalize_angle(e.y.atan2(e.x));
        let better = match best {
            None => true,
            Some((w, ang, _)) => {
                width < w - TIE * scale
                    || (width <= w + TIE * scale && (angle.abs() < ang.abs() || (angle.abs() == ang.abs() && angle > ang)))
            }
        };
        if better {
            // anchor on the centre line: half the height back from the edge
            let nrm = e.perp() * (1.0 / len);
            best = Some((width, angle, a + nrm * (0.5 * width)));
        }
    }
    best.map(|(w, angle, anchor)| StripFit { half_width: 0.5 * w, angle, anchor })
}

/// Points of `Γ ∩ B̄(center, r)` whose convex hull equals that of the set:
/// the endpoints of each boundary segment clipped to the disk.
pub fn boundary_points_in_ball(domain: &PlanarDomain, center: Point, r: f64, out: &mut Vec<Point>) {
    out.clear();
    let lo = center - Point::new(r, r);
    let hi = center + Point::new(r, r);
    domain.for_each_segment_in_box(lo, hi, |s| {
        let d = s.b - s.a;
        let f = s.a - center;
        let a = d.norm2();
        if a == 0.0 {
            return;
        }
        let b = f.dot(d);
        let c = f.norm2() - r * r;
        let disc = b * b - a * c;
        if disc < 0.0 {
            return;
        }
        let sq = disc.sqrt();
        let t0 = ((-b - sq) / a).max(0.0);
        let t1 = ((-b + sq) / a).min(1.0);
        if t0 <= t1 {
            out.push(s.a + d * t0);
            out.push(s.a + d * t1);
        }
    });
}

/// `β∞,Γ(B(center, r))`: largest distance from `Γ ∩ B` to the best line, over `r`.
pub fn beta_inf(domain: &PlanarDomain, center: Point, r: f64) -> Result<BetaFit> {
    if !(r > 0.0) {
        return Err(Error::Precondition(format!("radius must be positive, got {r}")));
    }
    let mut pts = Vec::new();
    boundary_points_in_ball(domain, center, r, &mut pts);
    let line = min_width_strip(&pts).ok_or(Error::EmptyIntersection)?;
    Ok(BetaFit { beta: line.half_width / r, line })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_with_interior() {
        let pts = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.5),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.5, 0.0),
        ];
        assert_eq!(convex_hull(&pts).len(), 4);
    }

    #[test]
    fn square_strip_prefers_horizontal() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        let s = min_width_strip(&pts).unwrap();
        assert!((s.half_width - 0.5).abs() < 1e-15);
        assert_eq!(s.angle, 0.0);
        assert!((s.anchor.y - 0.5).abs() < 1e-15);
    }

    #[test]
    fn collinear_points_have_zero_width() {
        let pts: Vec<Point> = (0..10).map(|k| Point::new(k as f64, 2.0 * k as f64)).collect();
        let s = min_width_strip(&pts).unwrap();
        assert_eq!(s.half_width, 0.0);
        assert!((s.angle - 2f64.atan()).abs() < 1e-15);
    }

    #[test]
    fn line_domain_is_flat() {
        let d = PlanarDomain::line();
        let b = beta_inf(&d, Point::new(0.1, 0.0), 0.3).unwrap();
        assert_eq!(b.beta, 0.0);
        assert_eq!(b.line.angle, 0.0);
    }

    #[test]
    fn empty_ball_is_an_error() {
        let d = PlanarDomain::line();
        assert_eq!(beta_inf(&d, Point::new(0.0, 2.0), 0.5), Err(Error::EmptyIntersection));
    }
}

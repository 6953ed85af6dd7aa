//! Empirical tangent test with two-sided cones `X_a(x, u) = {y : |(y − x)·u| > a|y − x|}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{PlanarDomain, Point, RegionLabel};
use crate::quad::RadialGrid;

use super::strip::beta_inf;

/// Default aperture parameters; smaller `a` is a wider cone.
pub const DEFAULT_APERTURES: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// Octaves above the finest radius a passing scale must reach for a tangent verdict.
pub const TANGENT_MIN_OCTAVES: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TangentVerdict {
    /// Every aperture separates `Ω±` at all tested radii up to `scale`.
    Tangent { scale: f64 },
    /// Some aperture fails already at the finest radius.
    NotTangent { aperture: f64 },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentReport {
    pub point: Point,
    pub axis: Point,
    pub verdict: TangentVerdict,
    /// Per aperture, the largest radius up to which every tested radius passes.
    pub passing: Vec<(f64, Option<f64>)>,
}

/// Whether `Γ` avoids `X_a(x, u) ∩ B(x, r)` and the two cone halves lie on opposite sides.
pub fn cone_separates(domain: &PlanarDomain, x: Point, u: Point, a: f64, r: f64) -> bool {
    let tol = 1e-12 * r * r;
    let a2 = a * a;
    let mut clear = true;
    let lo = x - Point::new(r, r);
    let hi = x + Point::new(r, r);
    domain.for_each_segment_in_box(lo, hi, |s| {
        if !clear {
            return;
        }
        // clip to the disk
        let d = s.b - s.a;
        let f = s.a - x;
        let qa = d.norm2();
        if qa == 0.0 {
            return;
        }
        let qb = f.dot(d);
        let disc = qb * qb - qa * (f.norm2() - r * r);
        if disc < 0.0 {
            return;
        }
        let sq = disc.sqrt();
        let t0 = ((-qb - sq) / qa).max(0.0);
        let t1 = ((-qb + sq) / qa).min(1.0);
        if t0 > t1 {
            return;
        }
        let w0 = f + d * t0;
        let e = d * (t1 - t0);
        // Q(t) = (w·u)² − a²|w|² on t ∈ [0, 1]
        let ca = e.dot(u).powi(2) - a2 * e.norm2();
        let cb = 2.0 * (w0.dot(u) * e.dot(u) - a2 * w0.dot(e));
        let cc = w0.dot(u).powi(2) - a2 * w0.norm2();
        let q = |t: f64| (ca * t + cb) * t + cc;
        let mut m = q(0.0).max(q(1.0));
        if ca < 0.0 {
            let tv = -cb / (2.0 * ca);
            if tv > 0.0 && tv < 1.0 {
                m = m.max(q(tv));
            }
        }
        if m > tol {
            clear = false;
        }
    });
    if !clear {
        return false;
    }
    let up = domain.classify(x + u * (0.5 * r));
    let down = domain.classify(x - u * (0.5 * r));
    matches!(
        (up, down),
        (RegionLabel::InPlus, RegionLabel::InMinus) | (RegionLabel::InMinus, RegionLabel::InPlus)
    )
}

/// Cone test at every grid radius, with the axis normal to the best strip line at
/// the finest radius.
pub fn tangent_detect(domain: &PlanarDomain, x: Point, grid: &RadialGrid, apertures: &[f64]) -> Result<TangentReport> {
    if apertures.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
        return Err(Error::InvalidInput("apertures must lie in (0, 1)".into()));
    }
    if domain.dist_within(x, domain.snap_tolerance()) > domain.snap_tolerance() {
        return Err(Error::Precondition(format!("point ({}, {}) is not on the curve", x.x, x.y)));
    }
    let mut radii = grid.nodes.clone();
    radii.reverse();
    let finest = radii[0];
    let axis = beta_inf(domain, x, finest)?.line.normal();
    let mut passing = Vec::with_capacity(apertures.len());
    let mut verdict = None;
    let mut scale = f64::INFINITY;
    for &a in apertures {
        let mut best = None;
        for &r in &radii {
            if cone_separates(domain, x, axis, a, r) {
                best = Some(r);
            } else {
                break;
            }
        }
        match best {
            None => {
                verdict.get_or_insert(TangentVerdict::NotTangent { aperture: a });
                scale = 0.0;
            }
            Some(r) => scale = scale.min(r),
        }
        passing.push((a, best));
    }
    let verdict = verdict.unwrap_or(if scale >= finest * 2f64.powf(TANGENT_MIN_OCTAVES) * (1.0 - 1e-12) {
        TangentVerdict::Tangent { scale }
    } else {
        TangentVerdict::Inconclusive
    });
    Ok(TangentReport { point: x, axis, verdict, passing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_square() -> PlanarDomain {
        PlanarDomain::jordan(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn corner_cone_thresholds() {
        let d = unit_square();
        let x = Point::new(0.0, 0.0);
        let u = Point::new(1.0, 1.0) * (1.0 / 2f64.sqrt());
        assert!(cone_separates(&d, x, u, (PI / 4.0 - 0.1).cos(), 0.05));
        assert!(!cone_separates(&d, x, u, (PI / 4.0 + 0.1).cos(), 0.05));
    }

    #[test]
    fn square_verdicts() {
        let d = unit_square();
        let g = RadialGrid::new(1e-3, 0.4, 8).unwrap();
        let corner = tangent_detect(&d, Point::new(1.0, 1.0), &g, &DEFAULT_APERTURES).unwrap();
        assert!(matches!(corner.verdict, TangentVerdict::NotTangent { .. }));
        let edge = tangent_detect(&d, Point::new(0.5, 0.0), &g, &DEFAULT_APERTURES).unwrap();
        assert!(matches!(edge.verdict, TangentVerdict::Tangent { .. }), "{edge:?}");
    }

    #[test]
    fn off_curve_rejected() {
        let g = RadialGrid::new(1e-3, 0.4, 8).unwrap();
        assert!(tangent_detect(&unit_square(), Point::new(0.5, 0.5), &g, &DEFAULT_APERTURES).is_err());
    }
}

use serde::Serialize;

use super::domain::{PlanarDomain, RegionLabel};
use super::point::Point;
use crate::error::{Error, Result};

/// A ball `B(center, radius)`; radius 0 means nothing was found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

/// Largest balls found on a `grid_n × grid_n` lattice inside `B(x, r) ∩ Ω±`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorkscrewBalls {
    pub plus: Ball,
    pub minus: Ball,
}

/// Grid search for corkscrew balls: each lattice point `p ∈ B(x, r)` scores
/// `min(dist(p, Γ), r − |p − x|)` and the best point per side wins.
pub fn corkscrew_search(domain: &PlanarDomain, x: Point, r: f64, grid_n: usize) -> Result<CorkscrewBalls> {
    if grid_n < 16 {
        return Err(Error::Precondition(format!("grid_n must be at least 16, got {grid_n}")));
    }
    if !(r > 0.0) {
        return Err(Error::Precondition(format!("radius must be positive, got {r}")));
    }
    if domain.dist_within(x, r) > r {
        return Err(Error::Precondition("centre is farther than r from the boundary".into()));
    }
    let mut segs = Vec::new();
    let reach = Point::new(2.0 * r, 2.0 * r);
    domain.for_each_segment_in_box(x - reach, x + reach, |s| segs.push(s));

    let mut plus = Ball { center: x, radius: 0.0 };
    let mut minus = Ball { center: x, radius: 0.0 };
    let step = 2.0 * r / grid_n as f64;
    for j in 0..grid_n {
        for i in 0..grid_n {
            let p = Point::new(x.x - r + (i as f64 + 0.5) * step, x.y - r + (j as f64 + 0.5) * step);
            let room = r - p.dist(x);
            if room <= 0.0 {
                continue;
            }
            let best = match domain.classify(p) {
                RegionLabel::InPlus => &mut plus,
                RegionLabel::InMinus => &mut minus,
                RegionLabel::OnGamma => continue,
            };
            if room <= best.radius {
                continue;
            }
            let gap = segs.iter().map(|s| s.dist_to(p)).fold(f64::INFINITY, f64::min);
            let score = gap.min(room);
            if score > best.radius {
                *best = Ball { center: p, radius: score };
            }
        }
    }
    Ok(CorkscrewBalls { plus, minus })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_plane_balls() {
        let b = corkscrew_search(&PlanarDomain::line(), Point::new(0.0, 0.0), 1.0, 256).unwrap();
        assert!(b.plus.radius >= 0.45 && b.plus.radius <= 0.5 + 1e-12);
        assert!(b.minus.radius >= 0.45);
        assert!(b.plus.center.y > 0.0 && b.minus.center.y < 0.0);
    }

    #[test]
    fn far_centre_rejected() {
        let r = corkscrew_search(&PlanarDomain::line(), Point::new(0.0, 2.0), 1.0, 64);
        assert!(matches!(r, Err(Error::Precondition(_))));
        assert!(corkscrew_search(&PlanarDomain::line(), Point::new(0.0, 0.0), 1.0, 8).is_err());
    }
}

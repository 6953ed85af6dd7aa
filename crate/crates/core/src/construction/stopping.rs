//! Good and very good balls on the radius ladder, the stopping radius `h`,
//! its regularizations `d` and `D`, and the Z / LD / BA partition.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::multiscale::{min_width_strip, StripFit};

use super::measure::WeightedPointSet;
use super::params::ConstructionParams;

/// Outcome of the goodness test for one ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallClass {
    pub density: f64,
    pub angle: f64,
    pub dense: bool,
    pub flat: bool,
}

impl BallClass {
    pub fn good(&self) -> bool {
        self.dense && self.flat
    }
}

/// Best strip line of the atoms in the closed ball.
pub fn ball_line(mu: &WeightedPointSet, c: Point, r: f64) -> Option<StripFit> {
    let mut ids = Vec::new();
    mu.ball_indices(c, r, &mut ids);
    let pts: Vec<Point> = ids.iter().map(|&i| mu.points()[i]).collect();
    min_width_strip(&pts)
}

/// Goodness of `B(c, r)` in a frame where the root line is horizontal.
pub fn classify_ball(mu: &WeightedPointSet, c: Point, r: f64, params: &ConstructionParams) -> Result<BallClass> {
    let mut ids = Vec::new();
    mu.ball_indices(c, r, &mut ids);
    if ids.is_empty() {
        return Err(Error::EmptyBall);
    }
    let mass: f64 = ids.iter().map(|&i| mu.weights()[i]).sum();
    let pts: Vec<Point> = ids.iter().map(|&i| mu.points()[i]).collect();
    let line = min_width_strip(&pts).ok_or(Error::EmptyBall)?;
    Ok(judge(mass / r, line.angle_to_horizontal(), params))
}

fn judge(density: f64, angle: f64, params: &ConstructionParams) -> BallClass {
    BallClass { density, angle, dense: density >= params.theta, flat: angle <= params.alpha }
}

/// Class of a support point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PointLabel {
    /// Stopped only at the ladder floor.
    Z,
    /// Stopped by low density.
    LD,
    /// Stopped by a big angle.
    BA,
}

/// Ladder scan of one support point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stop {
    /// Smallest ladder radius whose ball is very good.
    pub h: f64,
    /// Ladder index of `h`.
    pub level: usize,
    /// The first failing ball below `h`, if any.
    pub failure: Option<BallClass>,
}

impl Stop {
    pub fn label(&self) -> PointLabel {
        match self.failure {
            None => PointLabel::Z,
            Some(f) if !f.dense => PointLabel::LD,
            Some(_) => PointLabel::BA,
        }
    }
}

/// Scans the ladder top-down at atom `i` until the first ball that is not good.
pub fn stopping_radius(mu: &WeightedPointSet, i: usize, ladder: &[f64], params: &ConstructionParams) -> Result<Stop> {
    let x = mu.points()[i];
    let n = mu.len();
    let mut ids = Vec::new();
    let mut cached: Option<(usize, f64, StripFit)> = None;
    for (k, &r) in ladder.iter().enumerate() {
        mu.ball_indices(x, r, &mut ids);
        // membership only shrinks with r, so equal counts mean equal sets
        let (mass, line) = match cached {
            Some((count, mass, line)) if count == ids.len() => (mass, line),
            _ => {
                let mass: f64 = ids.iter().map(|&j| mu.weights()[j]).sum();
                let pts: Vec<Point> = ids.iter().map(|&j| mu.points()[j]).collect();
                let line = min_width_strip(&pts).ok_or(Error::EmptyBall)?;
                cached = Some((ids.len(), mass, line));
                (mass, line)
            }
        };
        let class = judge(mass / r, line.angle_to_horizontal(), params);
        if !class.good() {
            if k == 0 {
                return Err(Error::NoVeryGoodBall { x: x.x, y: x.y });
            }
            return Ok(Stop { h: ladder[k - 1], level: k - 1, failure: Some(class) });
        }
        debug_assert!(ids.len() <= n);
    }
    let level = ladder.len() - 1;
    Ok(Stop { h: ladder[level], level, failure: None })
}

/// `h` at every atom together with the envelopes `d` and `D`.
#[derive(Debug, Clone, Serialize)]
pub struct StoppingData {
    pub stops: Vec<Stop>,
    /// `h` is quantized to the ladder; atoms stopped at its floor count as `h = 0`.
    pub z0_tol: f64,
    #[serde(skip)]
    envelope: ConeEnvelope,
    #[serde(skip)]
    points: Vec<Point>,
}

impl StoppingData {
    pub fn compute(mu: &WeightedPointSet, params: &ConstructionParams) -> Result<Self> {
        let ladder = params.ladder();
        let stops = (0..mu.len())
            .into_par_iter()
            .map(|i| stopping_radius(mu, i, &ladder, params))
            .collect::<Result<Vec<_>>>()?;
        let apexes = mu.points().iter().zip(&stops).map(|(p, s)| (p.x, s.h)).collect();
        Ok(StoppingData {
            stops,
            z0_tol: params.ladder_floor(),
            envelope: ConeEnvelope::new(apexes),
            points: mu.points().to_vec(),
        })
    }

    pub fn h(&self, i: usize) -> f64 {
        self.stops[i].h
    }

    pub fn label(&self, i: usize) -> PointLabel {
        self.stops[i].label()
    }

    /// `d(q) = min_z |q − z| + h(z)`.
    pub fn d(&self, q: Point) -> f64 {
        self.points.iter().zip(&self.stops).map(|(z, s)| q.dist(*z) + s.h).fold(f64::INFINITY, f64::min)
    }

    /// `D` on the horizontal axis.
    pub fn envelope(&self) -> &ConeEnvelope {
        &self.envelope
    }

    pub fn in_z0(&self, q: Point) -> bool {
        self.d(q) <= self.z0_tol
    }
}

/// A non-negative function on the line with an exact infimum over intervals.
pub trait LineFunction {
    fn value(&self, p: f64) -> f64;
    fn inf_on(&self, a: f64, b: f64) -> f64;
}

/// Lower envelope `p ↦ min_k |p − a_k| + h_k` of upward cones.
#[derive(Debug, Clone, Default)]
pub struct ConeEnvelope {
    apex: Vec<f64>,
    height: Vec<f64>,
    /// prefix minima of `h − a` and suffix minima of `h + a`
    left: Vec<f64>,
    right: Vec<f64>,
    sparse: Vec<Vec<f64>>,
}

impl ConeEnvelope {
    pub fn new(mut apexes: Vec<(f64, f64)>) -> Self {
        apexes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let apex: Vec<f64> = apexes.iter().map(|a| a.0).collect();
        let height: Vec<f64> = apexes.iter().map(|a| a.1).collect();
        let n = apex.len();
        let mut left = vec![f64::INFINITY; n];
        let mut right = vec![f64::INFINITY; n];
        let mut acc = f64::INFINITY;
        for k in 0..n {
            acc = acc.min(height[k] - apex[k]);
            left[k] = acc;
        }
        acc = f64::INFINITY;
        for k in (0..n).rev() {
            acc = acc.min(height[k] + apex[k]);
            right[k] = acc;
        }
        let mut sparse = vec![height.clone()];
        let mut w = 1;
        while 2 * w <= n {
            let prev = sparse.last().unwrap();
            let next: Vec<f64> = (0..=n - 2 * w).map(|k| prev[k].min(prev[k + w])).collect();
            sparse.push(next);
            w *= 2;
        }
        ConeEnvelope { apex, height, left, right, sparse }
    }

    fn range_min(&self, lo: usize, hi: usize) -> f64 {
        if lo >= hi {
            return f64::INFINITY;
        }
        let level = (usize::BITS - 1 - (hi - lo).leading_zeros()) as usize;
        let row = &self.sparse[level];
        row[lo].min(row[hi - (1 << level)])
    }

    pub fn len(&self) -> usize {
        self.apex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.apex.is_empty()
    }

    /// Apex abscissae with their heights, sorted.
    pub fn apexes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.apex.iter().copied().zip(self.height.iter().copied())
    }
}

impl LineFunction for ConeEnvelope {
    fn value(&self, p: f64) -> f64 {
        let k = self.apex.partition_point(|&a| a <= p);
        let mut best = f64::INFINITY;
        if k > 0 {
            best = best.min(p + self.left[k - 1]);
        }
        if k < self.apex.len() {
            best = best.min(self.right[k] - p);
        }
        best
    }

    fn inf_on(&self, a: f64, b: f64) -> f64 {
        let lo = self.apex.partition_point(|&x| x < a);
        let hi = self.apex.partition_point(|&x| x <= b);
        self.value(a).min(self.value(b)).min(self.range_min(lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_matches_brute_force() {
        let cones = vec![(0.3, 0.2), (-0.5, 0.05), (0.9, 0.0), (0.31, 0.4), (-2.0, 1.0)];
        let env = ConeEnvelope::new(cones.clone());
        let brute = |p: f64| cones.iter().map(|&(a, h)| (p - a).abs() + h).fold(f64::INFINITY, f64::min);
        for k in 0..400 {
            let p = -3.0 + k as f64 * 0.015;
            assert!((env.value(p) - brute(p)).abs() < 1e-14);
        }
        for &(a, b) in &[(-1.0, 0.0), (0.0, 0.85), (0.2, 0.35), (1.5, 2.5), (-0.52, -0.48)] {
            let fine = (0..=20000).map(|k| brute(a + (b - a) * k as f64 / 20000.0)).fold(f64::INFINITY, f64::min);
            let inf = env.inf_on(a, b);
            assert!(inf <= fine + 1e-14 && fine - inf <= (b - a) / 20000.0, "{a} {b}");
        }
    }

    fn line_measure(n: usize, slope: f64) -> WeightedPointSet {
        let pts = (0..n).map(|k| {
            let x = -1.0 + 2.0 * (k as f64 + 0.5) / n as f64;
            Point::new(x, slope * x)
        });
        WeightedPointSet::uniform(pts.collect(), 2.0).unwrap()
    }

    #[test]
    fn points_on_axis_stop_at_floor() {
        let p = ConstructionParams::default();
        let mu = line_measure(200, 0.0);
        let s = StoppingData::compute(&mu, &p).unwrap();
        assert!(s.stops.iter().all(|st| st.label() == PointLabel::Z && st.h == p.ladder_floor()));
        assert!(s.in_z0(Point::new(0.1, 0.0)) || s.d(Point::new(0.1, 0.0)) < 0.01);
    }

    #[test]
    fn steep_line_is_not_good() {
        let p = ConstructionParams::default();
        let mu = line_measure(200, (2.0 * p.alpha).tan());
        let c = classify_ball(&mu, Point::new(0.0, 0.0), 0.5, &p).unwrap();
        assert!(c.dense && !c.flat);
        assert!((c.angle - 2.0 * p.alpha).abs() < 1e-12);
    }

    #[test]
    fn sparse_ball_is_not_dense() {
        let p = ConstructionParams::default();
        let mu = WeightedPointSet::new(vec![Point::new(0.0, 0.0)], vec![p.theta * 0.5]).unwrap();
        let c = classify_ball(&mu, Point::new(0.0, 0.0), 1.0, &p).unwrap();
        assert!(!c.dense && c.flat && !c.good());
        assert_eq!(classify_ball(&mu, Point::new(5.0, 0.0), 1.0, &p), Err(Error::EmptyBall));
    }

    #[test]
    fn isolated_heavy_point_is_not_z() {
        let p = ConstructionParams::default();
        let mut pts: Vec<Point> = line_measure(400, 0.0).points().to_vec();
        let mut w = vec![2.0 / 400.0; 400];
        pts.push(Point::new(0.1, 0.25));
        w.push(p.theta * 0.5);
        let mu = WeightedPointSet::new(pts, w).unwrap();
        let s = StoppingData::compute(&mu, &p).unwrap();
        let i = mu.points().iter().position(|q| q.y == 0.25).unwrap();
        assert_ne!(s.label(i), PointLabel::Z);
        assert!(s.h(i) >= 0.25 / 2.0, "{}", s.h(i));
    }
}

//! The blended graph `A = Σ φ_i A_i` over a Whitney cover.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::kernel::{smooth_step, smooth_step_deriv};

use super::measure::WeightedPointSet;
use super::params::ConstructionParams;
use super::stopping::{ball_line, PointLabel, StoppingData};
use super::whitney::WhitneyCover;

/// Bumps equal one on `R_i` and vanish outside `3R_i`.
const BUMP_REACH: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SourceBall {
    pub center: Point,
    pub radius: f64,
}

/// `A_i(p) = slope·p + intercept` on the Whitney interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffinePiece {
    pub interval: (f64, f64),
    pub slope: f64,
    pub intercept: f64,
    /// `None` off the central intervals, where the piece is zero.
    pub ball: Option<SourceBall>,
}

impl AffinePiece {
    pub fn eval(&self, p: f64) -> f64 {
        self.slope * p + self.intercept
    }

    fn center(&self) -> f64 {
        0.5 * (self.interval.0 + self.interval.1)
    }

    fn len(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    /// Unnormalized bump and its derivative.
    fn bump(&self, p: f64) -> (f64, f64) {
        let l = self.len();
        let off = p - self.center();
        let u = (BUMP_REACH * l - off.abs()) / l;
        (smooth_step(u), -off.signum() * smooth_step_deriv(u) / l)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphFunction {
    pub pieces: Vec<AffinePiece>,
    /// Heights of stopped atoms, sorted by abscissa.
    pub z_samples: Vec<(f64, f64)>,
    /// `A` vanishes outside `(−extent, extent)`.
    pub extent: f64,
    #[serde(skip)]
    neighbors: Vec<Vec<usize>>,
}

/// Blend weights at one abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlendInfo {
    pub value: f64,
    /// `Σ` of unnormalized bumps.
    pub bump_sum: f64,
    /// `Σ φ_i` over the affine pieces.
    pub phi_sum: f64,
    /// `max ℓ_i |φ_i'|`, meaningful where `bump_sum ≥ 1`.
    pub scaled_deriv: f64,
}

/// Ball with the smallest `|r − ℓ| + dist(R, Π(B))` among the very good ladder balls;
/// ties go to the smallest centre abscissa, then to the larger radius.
pub fn select_ball(
    mu: &WeightedPointSet,
    stopping: &StoppingData,
    params: &ConstructionParams,
    ladder: &[f64],
    lo: f64,
    hi: f64,
) -> Option<SourceBall> {
    let len = hi - lo;
    let per = params.radii_per_octave as f64;
    let k_len = per * (ladder[0] / len).log2();
    let mut best: Option<(f64, f64, f64, Point)> = None;
    for (i, z) in mu.points().iter().enumerate() {
        let level = stopping.stops[i].level;
        let delta = (lo - z.x).max(z.x - hi).max(0.0);
        let mut consider = |k: usize| {
            let r = ladder[k];
            let g = (r - len).abs() + (delta - r).max(0.0);
            // among equal scores the larger ball is the one whose shadow reaches the interval
            let better = match best {
                None => true,
                Some((bg, bx, br, _)) => (g, z.x, -r) < (bg, bx, -br),
            };
            if better {
                best = Some((g, z.x, r, *z));
            }
        };
        consider(level);
        let k_delta = per * (ladder[0] / delta.max(ladder[level])).log2();
        for k in [k_len.floor(), k_len.ceil(), k_delta.floor(), k_delta.ceil()] {
            let k = k.max(0.0) as usize;
            if k < level {
                consider(k);
            }
        }
    }
    best.map(|(_, _, r, c)| SourceBall { center: c, radius: r })
}

impl GraphFunction {
    pub fn build(
        mu: &WeightedPointSet,
        cover: &WhitneyCover,
        stopping: &StoppingData,
        params: &ConstructionParams,
    ) -> Result<Self> {
        let ladder = params.ladder();
        let z_samples: Vec<(f64, f64)> = mu
            .points()
            .iter()
            .enumerate()
            .filter(|&(i, _)| stopping.label(i) == PointLabel::Z)
            .map(|(_, p)| (p.x, p.y))
            .collect();
        if cover.is_empty() && z_samples.is_empty() {
            return Err(Error::ResolutionFloorHit);
        }
        let mut pieces = Vec::with_capacity(cover.len());
        for w in &cover.intervals {
            let interval = (w.lo, w.hi());
            if !w.central {
                pieces.push(AffinePiece { interval, slope: 0.0, intercept: 0.0, ball: None });
                continue;
            }
            let ball = select_ball(mu, stopping, params, &ladder, w.lo, w.hi())
                .ok_or(Error::NoCandidateBall { lo: w.lo, hi: w.hi() })?;
            let line = ball_line(mu, ball.center, ball.radius).ok_or(Error::NoCandidateBall { lo: w.lo, hi: w.hi() })?;
            let (slope, intercept) = line.as_affine();
            pieces.push(AffinePiece { interval, slope, intercept, ball: Some(ball) });
        }
        let extent = cover.root.1.abs().max(cover.root.0.abs()).max((cover.root.0 + cover.root.1).abs());
        Ok(GraphFunction { pieces, z_samples, extent, neighbors: cover.neighbors.clone() })
    }

    /// Linear interpolation of the stopped heights, constant beyond the ends.
    fn z_interp(&self, p: f64) -> f64 {
        let z = &self.z_samples;
        if z.is_empty() {
            return 0.0;
        }
        let k = z.partition_point(|s| s.0 <= p);
        if k == 0 {
            return z[0].1;
        }
        if k == z.len() {
            return z[k - 1].1;
        }
        let (a, b) = (z[k - 1], z[k]);
        if b.0 == a.0 {
            return a.1;
        }
        a.1 + (b.1 - a.1) * (p - a.0) / (b.0 - a.0)
    }

    fn candidates(&self, p: f64, out: &mut Vec<usize>) {
        out.clear();
        let k = self.pieces.partition_point(|w| w.interval.0 <= p);
        for j in [k.checked_sub(1), (k < self.pieces.len()).then_some(k)].into_iter().flatten() {
            out.push(j);
            out.extend_from_slice(&self.neighbors[j]);
        }
        out.sort_unstable();
        out.dedup();
    }

    pub fn blend(&self, p: f64) -> BlendInfo {
        if p.abs() >= self.extent {
            return BlendInfo { value: 0.0, bump_sum: 0.0, phi_sum: 0.0, scaled_deriv: 0.0 };
        }
        let mut ids = Vec::new();
        self.candidates(p, &mut ids);
        let mut s = 0.0;
        let mut ds = 0.0;
        let mut t = 0.0;
        let mut terms = Vec::with_capacity(ids.len());
        for &j in &ids {
            let piece = &self.pieces[j];
            let (b, db) = piece.bump(p);
            if b > 0.0 || db != 0.0 {
                s += b;
                ds += db;
                t += b * piece.eval(p);
                terms.push((b, db, piece.len()));
            }
        }
        let wz = (1.0 - s).max(0.0);
        let value = (t + wz * self.z_interp(p)) / (s + wz);
        let phi_sum = crate::quad::pairwise_sum(&terms.iter().map(|&(b, _, _)| b / (s + wz)).collect::<Vec<_>>());
        let scaled_deriv = if s > 0.0 {
            terms.iter().map(|&(b, db, l)| l * (db / s - b * ds / (s * s)).abs()).fold(0.0, f64::max)
        } else {
            0.0
        };
        BlendInfo { value, bump_sum: s, phi_sum, scaled_deriv }
    }

    /// `A(p)`; exact heights at stopped abscissae.
    pub fn eval(&self, p: f64) -> f64 {
        let k = self.z_samples.partition_point(|s| s.0 < p);
        if k < self.z_samples.len() && self.z_samples[k].0 == p {
            return self.z_samples[k].1;
        }
        self.blend(p).value
    }

    pub fn central_pieces(&self) -> impl Iterator<Item = &AffinePiece> {
        self.pieces.iter().filter(|p| p.ball.is_some())
    }
}

/// `A` on a uniform grid with its measured regularity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSamples {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest divided difference between neighbouring nodes.
    pub max_slope: f64,
    /// Largest `|A|` at nodes with `|p| > 12R`.
    pub outside_support: f64,
    /// Largest `|Σφ_i − 1|` at covered nodes.
    pub partition_error: f64,
    /// Largest `ℓ_i |φ_i'|` at covered nodes.
    pub bump_deriv_constant: f64,
}

/// Output grid half-width in units of `R`.
pub const GRID_EXTENT: f64 = 13.0;
/// Output grid intervals.
pub const GRID_INTERVALS: usize = 8192;

pub fn sample_graph(graph: &GraphFunction, root_radius: f64) -> GraphSamples {
    let a = GRID_EXTENT * root_radius;
    let grid: Vec<f64> = (0..=GRID_INTERVALS).map(|k| -a + 2.0 * a * k as f64 / GRID_INTERVALS as f64).collect();
    let mut values = Vec::with_capacity(grid.len());
    let mut partition_error: f64 = 0.0;
    let mut bump_deriv_constant: f64 = 0.0;
    let mut outside_support: f64 = 0.0;
    for &p in &grid {
        let info = graph.blend(p);
        if info.bump_sum >= 1.0 {
            partition_error = partition_error.max((info.phi_sum - 1.0).abs());
            bump_deriv_constant = bump_deriv_constant.max(info.scaled_deriv);
        }
        if p.abs() > 12.0 * root_radius {
            outside_support = outside_support.max(info.value.abs());
        }
        values.push(info.value);
    }
    let max_slope = grid
        .windows(2)
        .zip(values.windows(2))
        .map(|(g, v)| ((v[1] - v[0]) / (g[1] - g[0])).abs())
        .fold(0.0, f64::max);
    GraphSamples { grid, values, max_slope, outside_support, partition_error, bump_deriv_constant }
}

//! Measured constants of the closeness lemmas and the explicit vertical
//! Lipschitz bound `|Π^⊥x − Π^⊥y| ≤ 6α|Πx − Πy| + 4d(x) + 4d(y)`.

use serde::Serialize;

use crate::geometry::{Point, Segment};

use super::graph::GraphSamples;
use super::measure::WeightedPointSet;
use super::params::ConstructionParams;
use super::stopping::{PointLabel, StoppingData};

/// Atoms used for the pairwise bound.
pub const PAIR_SAMPLE: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// `max dist(x, G_A) / d(x)` over atoms in `B(0, 10R)`.
    pub dist_to_graph_constant: f64,
    /// `max dist(x, G_A) / (ε d(x))`.
    pub flat_dist_constant: f64,
    /// `max_p |A(p)| / (ε R)`.
    pub graph_height_constant: f64,
    pub pair_count: usize,
    pub pair_violations: usize,
    /// Largest `lhs / rhs` of the vertical bound over sampled pairs.
    pub pair_worst_ratio: f64,
    /// Largest distance from a stopped atom to `G_A`.
    pub z_max_dist: f64,
    /// `z0_tol` plus the output grid step.
    pub z_tolerance: f64,
    /// `h(x) ≤ 2R` at every atom of the root ball.
    pub h_bound_ok: bool,
}

impl Diagnostics {
    pub fn pair_bound_holds(&self) -> bool {
        self.pair_violations == 0
    }

    pub fn graph_covers_z(&self) -> bool {
        self.z_max_dist <= self.z_tolerance
    }
}

/// Distance from `x` to the polyline through the samples.
pub fn dist_to_polyline(samples: &GraphSamples, x: Point) -> f64 {
    let g = &samples.grid;
    let v = &samples.values;
    let k = g.partition_point(|&p| p <= x.x).clamp(1, g.len() - 1);
    let seg = |j: usize| Segment::new(Point::new(g[j - 1], v[j - 1]), Point::new(g[j], v[j]));
    let mut best = seg(k).dist_to(x);
    // segments whose abscissae are farther than `best` cannot be closer
    let mut j = k;
    while j > 1 && x.x - g[j - 1] < best {
        j -= 1;
        best = best.min(seg(j).dist_to(x));
    }
    let mut j = k;
    while j + 1 < g.len() && g[j] - x.x < best {
        j += 1;
        best = best.min(seg(j).dist_to(x));
    }
    best
}

pub fn diagnostics(
    mu: &WeightedPointSet,
    stopping: &StoppingData,
    samples: &GraphSamples,
    params: &ConstructionParams,
) -> Diagnostics {
    let r0 = params.root_radius;
    let eps = params.flat_param;
    let step = samples.grid[1] - samples.grid[0];
    let resolution = stopping.z0_tol + step;
    let d: Vec<f64> = mu.points().iter().map(|&x| stopping.d(x)).collect();
    let mut dist_to_graph_constant: f64 = 0.0;
    let mut z_max_dist: f64 = 0.0;
    for (i, &x) in mu.points().iter().enumerate() {
        if x.norm() > 10.0 * r0 {
            continue;
        }
        let dist = dist_to_polyline(samples, x);
        dist_to_graph_constant = dist_to_graph_constant.max(dist / d[i].max(resolution));
        if stopping.label(i) == PointLabel::Z {
            z_max_dist = z_max_dist.max(dist);
        }
    }
    let height = samples.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let stride = mu.len().div_ceil(PAIR_SAMPLE).max(1);
    let picked: Vec<usize> = (0..mu.len()).step_by(stride).collect();
    let mut pair_count = 0;
    let mut pair_violations = 0;
    let mut pair_worst_ratio: f64 = 0.0;
    for (a, &i) in picked.iter().enumerate() {
        for &j in &picked[a + 1..] {
            let (x, y) = (mu.points()[i], mu.points()[j]);
            let lhs = (x.y - y.y).abs();
            let rhs = 6.0 * params.alpha * (x.x - y.x).abs() + 4.0 * d[i] + 4.0 * d[j];
            pair_count += 1;
            if lhs > rhs {
                pair_violations += 1;
            }
            if rhs > 0.0 {
                pair_worst_ratio = pair_worst_ratio.max(lhs / rhs);
            } else if lhs > 0.0 {
                pair_worst_ratio = f64::INFINITY;
            }
        }
    }
    let h_bound_ok = mu
        .points()
        .iter()
        .zip(&stopping.stops)
        .all(|(x, s)| (*x - params.root_center).norm() > r0 || s.h <= 2.0 * r0);
    Diagnostics {
        dist_to_graph_constant,
        flat_dist_constant: dist_to_graph_constant / eps,
        graph_height_constant: height / (eps * r0),
        pair_count,
        pair_violations,
        pair_worst_ratio,
        z_max_dist,
        z_tolerance: resolution,
        h_bound_ok,
    }
}

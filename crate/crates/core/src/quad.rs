//! Quadrature helpers: log-spaced radial grids, composite Gauss–Legendre rules
//! and a deterministic summation order.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use serde::Serialize;

use crate::error::{Error, Result};

/// Pairwise (tree) summation; the order depends only on the slice length.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if v.len() <= LEAF {
        return v.iter().fold(0.0, |a, b| a + b);
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Log-spaced radii realizing `∫_{r_min}^{r_max} g(r) dr/r` by the midpoint rule
/// in `ln r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub per_octave: usize,
    /// Strictly decreasing cell midpoints `r_max · e^{-(k+1/2)h}`.
    pub nodes: Vec<f64>,
    /// Log-measure of each cell, `ln(r_{k-1/2} / r_{k+1/2}) = h`.
    pub weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, per_octave: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidInput(format!("radial grid needs 0 < r_min < r_max (got {r_min}, {r_max})")));
        }
        if per_octave < 4 {
            return Err(Error::InvalidInput(format!("per_octave must be at least 4, got {per_octave}")));
        }
        let span = (r_max / r_min).ln();
        let cells = ((per_octave as f64 * span / std::f64::consts::LN_2) - 1e-9).ceil().max(1.0) as usize;
        let h = span / cells as f64;
        let nodes = (0..cells).map(|k| r_max * (-(k as f64 + 0.5) * h).exp()).collect();
        Ok(RadialGrid { r_min, r_max, per_octave, nodes, weights: vec![h; cells] })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ_k values[k] · w_k` in pairwise order.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        let terms: Vec<f64> = values.iter().zip(&self.weights).map(|(v, w)| v * w).collect();
        pairwise_sum(&terms)
    }

    /// Same lower cutoff, scaled by `λ` (used for dilation checks).
    pub fn scaled(&self, lambda: f64) -> Self {
        RadialGrid {
            r_min: self.r_min * lambda,
            r_max: self.r_max * lambda,
            per_octave: self.per_octave,
            nodes: self.nodes.iter().map(|r| r * lambda).collect(),
            weights: self.weights.clone(),
        }
    }
}

fn rule(n: usize) -> &'static [(f64, f64)] {
    static R8: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static R16: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static R32: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    let build = |n: usize| -> Vec<(f64, f64)> {
        let gl = GaussLegendre::new(NonZeroUsize::new(n).unwrap());
        let mut v: Vec<(f64, f64)> = gl.iter().map(|(x, w)| (*x, *w)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    };
    match n {
        8 => R8.get_or_init(|| build(8)),
        16 => R16.get_or_init(|| build(16)),
        32 => R32.get_or_init(|| build(32)),
        _ => panic!("unsupported Gauss-Legendre order {n}"),
    }
}

/// Gauss–Legendre nodes and weights of order `n ∈ {8, 16, 32}` mapped to `[a, b]`.
pub fn gl_nodes(n: usize, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule(n).iter().map(move |&(x, w)| (mid + half * x, half * w))
}

/// `∫_a^b f` with `panels` equal Gauss–Legendre panels of order `n`.
pub fn gl_integrate<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, n: usize, mut f: F) -> f64 {
    if b <= a {
        return 0.0;
    }
    let w = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * w;
        let mut s = 0.0;
        for (x, wt) in gl_nodes(n, lo, lo + w) {
            s += wt * f(x);
        }
        total += s;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_weights_sum_to_log_span() {
        for (a, b, p) in [(1e-3, 1.0, 8), (0.2, 7.0, 16), (1e-6, 1e-5, 4)] {
            let g = RadialGrid::new(a, b, p).unwrap();
            let s: f64 = g.weights.iter().sum();
            assert!((s - (b / a).ln()).abs() < 1e-12);
            assert!(g.nodes.windows(2).all(|w| w[1] < w[0]));
        }
        assert!(RadialGrid::new(1.0, 0.5, 8).is_err());
        assert!(RadialGrid::new(0.1, 1.0, 3).is_err());
    }

    #[test]
    fn radial_integral_of_power() {
        // ∫ r^2 dr/r = (b^2 - a^2)/2
        let g = RadialGrid::new(1e-3, 1.0, 16).unwrap();
        let v: Vec<f64> = g.nodes.iter().map(|r| r * r).collect();
        assert!((g.integrate(&v) - 0.5 * (1.0 - 1e-6)).abs() < 1e-3);
    }

    #[test]
    fn gauss_legendre_polynomial() {
        let v = gl_integrate(-1.0, 2.0, 3, 8, |x| x.powi(7) - 2.0 * x);
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (4.0 - 1.0);
        assert!((v - exact).abs() < 1e-11);
    }

    #[test]
    fn pairwise_matches_naive() {
        let v: Vec<f64> = (0..1000).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-12);
    }
}

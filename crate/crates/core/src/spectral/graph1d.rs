//! Compactly supported piecewise-linear functions on a uniform grid.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{PlanarDomain, Point};
use crate::kernel::Kernel;
use crate::quad::gl_nodes;

/// `f(x₀ + k·dx) = values[k]`, linear in between and zero outside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphFunction1D {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
    /// `P(x₀ + k·dx) = ∫_{−∞}^{x₀+k·dx} f`.
    #[serde(skip)]
    primitive: Vec<f64>,
}

impl GraphFunction1D {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite() && x0.is_finite()) {
            return Err(Error::InvalidInput(format!("grid needs finite x0 and dx > 0 (got {x0}, {dx})")));
        }
        if values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("need at least two finite samples".into()));
        }
        if values[0] != 0.0 || values[values.len() - 1] != 0.0 {
            return Err(Error::InvalidInput("samples must vanish at both ends".into()));
        }
        let mut primitive = Vec::with_capacity(values.len());
        let mut acc = 0.0;
        primitive.push(0.0);
        for w in values.windows(2) {
            acc += 0.5 * dx * (w[0] + w[1]);
            primitive.push(acc);
        }
        Ok(GraphFunction1D { x0, dx, values, primitive })
    }

    pub fn zero(x0: f64, dx: f64, n: usize) -> Self {
        Self::new(x0, dx, vec![0.0; n.max(2)]).unwrap()
    }

    /// `(first, last)` grid abscissae.
    pub fn support(&self) -> (f64, f64) {
        (self.x0, self.x0 + (self.values.len() - 1) as f64 * self.dx)
    }

    pub fn knots(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |k| self.x0 + k as f64 * self.dx)
    }

    fn locate(&self, x: f64) -> Option<(usize, f64)> {
        let t = (x - self.x0) / self.dx;
        let last = self.values.len() - 1;
        if !(t > 0.0) || t >= last as f64 {
            return None;
        }
        let k = (t.floor() as usize).min(last - 1);
        Some((k, t - k as f64))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.locate(x) {
            None => 0.0,
            Some((k, u)) => self.values[k] + u * (self.values[k + 1] - self.values[k]),
        }
    }

    /// `∫_{−∞}^x f`, exact.
    pub fn primitive(&self, x: f64) -> f64 {
        match self.locate(x) {
            None => {
                if x <= self.x0 {
                    0.0
                } else {
                    *self.primitive.last().unwrap()
                }
            }
            Some((k, u)) => {
                let (a, b) = (self.values[k], self.values[k + 1]);
                self.primitive[k] + self.dx * (a * u + 0.5 * (b - a) * u * u)
            }
        }
    }

    pub fn slopes(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.windows(2).map(move |w| (w[1] - w[0]) / self.dx)
    }

    /// `‖f'‖∞`.
    pub fn max_slope(&self) -> f64 {
        self.slopes().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// `‖f'‖₂²`, exact.
    pub fn deriv_l2_sq(&self) -> f64 {
        self.slopes().map(|s| s * s * self.dx).sum()
    }

    /// `f'` at a non-knot point.
    pub fn slope_at(&self, x: f64) -> f64 {
        match self.locate(x) {
            None => 0.0,
            Some((k, _)) => (self.values[k + 1] - self.values[k]) / self.dx,
        }
    }

    /// `λ f(x / λ)`.
    pub fn dilate(&self, lambda: f64) -> Self {
        let v = self.values.iter().map(|y| y * lambda).collect();
        Self::new(self.x0 * lambda, self.dx * lambda, v).unwrap()
    }

    pub fn scale_values(&self, c: f64) -> Self {
        Self::new(self.x0, self.dx, self.values.iter().map(|y| y * c).collect()).unwrap()
    }

    pub fn translate(&self, shift: f64) -> Self {
        Self::new(self.x0 + shift, self.dx, self.values.clone()).unwrap()
    }

    /// The region above the graph.
    pub fn domain(&self) -> Result<PlanarDomain> {
        PlanarDomain::graph_samples(self.x0, self.dx, &self.values)
    }

    pub fn point_on_graph(&self, x: f64) -> Point {
        Point::new(x, self.eval(x))
    }

    /// `∫ w(t) g(x − t) dt` over the two transition bands `r < |t| < 1.1r`.
    fn band_sum<G: Fn(f64) -> f64, W: Fn(f64) -> f64>(kernel: &Kernel, r: f64, w: W, g: G) -> f64 {
        let (p, q) = (kernel.plateau_end * r, kernel.support_end * r);
        let mut s = 0.0;
        for k in 0..BAND_PANELS {
            let a = p + (q - p) * k as f64 / BAND_PANELS as f64;
            let b = p + (q - p) * (k + 1) as f64 / BAND_PANELS as f64;
            for (t, wt) in gl_nodes(16, a, b) {
                s += wt * (w(t) * g(t) + w(-t) * g(-t));
            }
        }
        s
    }

    /// `(φ_r * f)(x)`, via `φ_r * f = r⁻² ∫ φ'(t/r) P(x − t) dt` on the bands.
    pub fn convolve(&self, kernel: &Kernel, x: f64, r: f64) -> f64 {
        // φ' integrates to zero, so subtracting P(x) is exact
        let px = self.primitive(x);
        Self::band_sum(kernel, r, |t| kernel.phi_deriv(t / r), |t| self.primitive(x - t) - px) / (r * r)
    }

    /// `(φ_r * f')(x) = r⁻² ∫ φ'(t/r) f(x − t) dt`.
    pub fn convolve_deriv(&self, kernel: &Kernel, x: f64, r: f64) -> f64 {
        let fx = self.eval(x);
        Self::band_sum(kernel, r, |t| kernel.phi_deriv(t / r), |t| self.eval(x - t) - fx) / (r * r)
    }
}

/// Gauss–Legendre panels per transition band.
const BAND_PANELS: usize = 4;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gl_integrate;

    fn hat() -> GraphFunction1D {
        GraphFunction1D::new(-1.0, 0.5, vec![0.0, 0.1, 0.3, 0.1, 0.0]).unwrap()
    }

    #[test]
    fn primitive_and_norms() {
        let f = hat();
        assert!((f.primitive(10.0) - 0.5 * (0.1 + 0.3 + 0.1) * 1.0).abs() < 1e-15);
        assert!((f.eval(-0.25) - 0.2).abs() < 1e-15);
        assert!((f.max_slope() - 0.4).abs() < 1e-15);
        assert!((f.deriv_l2_sq() - (0.04 + 0.16) * 2.0 * 0.5).abs() < 1e-15);
    }

    #[test]
    fn band_convolution_matches_brute_force() {
        let f = hat();
        let k = Kernel::new();
        for (x, r) in [(0.1, 0.3), (-0.7, 0.05), (0.4, 2.0)] {
            let mut breaks: Vec<f64> = f.knots().map(|kx| x - kx).collect();
            breaks.extend([-1.1 * r, -r, r, 1.1 * r]);
            breaks.retain(|t| t.abs() <= 1.1 * r);
            breaks.sort_by(f64::total_cmp);
            let direct: f64 =
                breaks.windows(2).map(|w| gl_integrate(w[0], w[1], 64, 16, |t| k.phi(t / r) * f.eval(x - t))).sum::<f64>() / r;
            let by_parts = f.convolve(&k, x, r);
            assert!((direct - by_parts).abs() < 1e-9, "{x} {r}: {direct} vs {by_parts}");
        }
    }

    #[test]
    fn linear_piece_is_reproduced() {
        let f = hat();
        let k = Kernel::new();
        let (x, r) = (-0.25, 0.05);
        let err = f.convolve(&k, x, r) - k.c_phi * f.eval(x);
        assert!(err.abs() < 1e-9, "{err}");
        assert!((f.convolve_deriv(&k, x, r) - k.c_phi * f.slope_at(x)).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_vanishing_ends() {
        assert!(GraphFunction1D::new(0.0, 0.1, vec![0.0, 1.0]).is_err());
    }
}

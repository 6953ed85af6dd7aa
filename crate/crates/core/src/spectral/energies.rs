//! Space-side and Fourier-side energies of graph functions.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::multiscale::DefectTable;
use crate::multiscale::{TABLE_FLOOR, TABLE_PER_OCTAVE};
use crate::quad::{gl_nodes, pairwise_sum, RadialGrid};

use super::constants::SpectralConstants;
use super::graph1d::GraphFunction1D;

/// Slope bound under which the product-kernel identity holds.
pub const RHO_SLOPE_LIMIT: f64 = 0.1;

/// Panel breaks covering `[lo, hi]` with panels no wider than `width`.
fn panels(lo: f64, hi: f64, width: f64) -> impl Iterator<Item = (f64, f64)> {
    let n = ((hi - lo) / width).ceil().max(1.0) as usize;
    let w = (hi - lo) / n as f64;
    (0..n).map(move |k| (lo + k as f64 * w, lo + (k + 1) as f64 * w))
}

/// Width of the `x` panels at scale `r` for a support of length `len`.
fn x_panel(r: f64, len: f64) -> f64 {
    (0.25 * r).min(len / 32.0)
}

/// `∫_ℝ ∫ |(φ_r * f(x) − c_φ f(x)) / r|² dr/r dx` by direct quadrature.
pub fn deviation_energy_direct(f: &GraphFunction1D, kernel: &Kernel, grid: &RadialGrid) -> f64 {
    let (a, b) = f.support();
    let per_r: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&r| {
            let reach = kernel.support_end * r;
            let mut terms = Vec::new();
            for (lo, hi) in panels(a - reach, b + reach, x_panel(r, b - a)) {
                let mut s = 0.0;
                for (x, w) in gl_nodes(8, lo, hi) {
                    let g = (f.convolve(kernel, x, r) - kernel.c_phi * f.eval(x)) / r;
                    s += w * g * g;
                }
                terms.push(s);
            }
            pairwise_sum(&terms)
        })
        .collect();
    grid.integrate(&per_r)
}

/// Radial grid `[dx, 1/dx]` at the given density, as used for identity checks.
pub fn identity_grid(f: &GraphFunction1D, per_octave: usize) -> Result<RadialGrid> {
    RadialGrid::new(f.dx, 1.0 / f.dx, per_octave)
}

/// `c̃_φ ∫ |ξ f̂(ξ)|² dξ` with `f̂` from an FFT of the samples.
///
/// The piecewise-linear interpolant has `f̂(ξ) = dx F(ξ) sinc²(ξ dx)` with `F` the
/// sample DFT; summing `|ξ f̂|²` over all aliases `ξ + m/dx` collapses the weight to
/// `sin²(πξ dx) / (π dx)²`, so one period of `|F|²` suffices.
pub fn plancherel_energy(f: &GraphFunction1D, constants: &SpectralConstants) -> f64 {
    let n = (2 * f.values.len()).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = f.values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    buf.resize(n, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let dx = f.dx;
    let period = 1.0 / dx;
    let terms: Vec<f64> = buf
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let theta = j as f64 / n as f64;
            let w = (PI * theta).sin().powi(2) / (PI * PI * dx * dx);
            dx * dx * c.norm_sqr() * w
        })
        .collect();
    constants.tilde_c * pairwise_sum(&terms) * period / n as f64
}

/// The Taylor-deviation integrand `(c_φ⁻¹ (φ_r * f')(x) z + f(x) − f(x + z)) / r`.
pub fn taylor_integrand(f: &GraphFunction1D, kernel: &Kernel, x: f64, r: f64, z: f64) -> f64 {
    let s = f.convolve_deriv(kernel, x, r) / kernel.c_phi;
    (s * z + f.eval(x) - f.eval(x + z)) / r
}

/// `∫∫∫_{|y−x|≤r} |(c_φ⁻¹(φ_r * f')(x)(y − x) + f(x) − f(y)) / r|² dy/r dx dr/r`.
pub fn taylor_deviation_energy(f: &GraphFunction1D, kernel: &Kernel, grid: &RadialGrid) -> f64 {
    let (a, b) = f.support();
    let per_r: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&r| {
            let reach = kernel.support_end * r;
            let mut terms = Vec::new();
            for (lo, hi) in panels(a - reach, b + reach, x_panel(r, b - a)) {
                let mut s = 0.0;
                for (x, w) in gl_nodes(8, lo, hi) {
                    let slope = f.convolve_deriv(kernel, x, r) / kernel.c_phi;
                    let fx = f.eval(x);
                    let mut inner = 0.0;
                    for (zl, zh) in panels(-r, r, (0.5 * r).min(4.0 * f.dx)) {
                        for (z, wz) in gl_nodes(8, zl, zh) {
                            let v = (slope * z + fx - f.eval(x + z)) / r;
                            inner += wz * v * v;
                        }
                    }
                    s += w * inner / r;
                }
                terms.push(s);
            }
            pairwise_sum(&terms)
        })
        .collect();
    grid.integrate(&per_r)
}

fn check_rho_slope(f: &GraphFunction1D) -> Result<()> {
    let s = f.max_slope();
    if s > RHO_SLOPE_LIMIT {
        Err(Error::SlopeTooLarge { slope: s, bound: RHO_SLOPE_LIMIT })
    } else {
        Ok(())
    }
}

/// Signed `𝔞_ρ((x₁, f(x₁)), r) = (φ_r * f(x₁) − c_φ f(x₁)) / r` for the product kernel.
pub fn graph_a_rho(f: &GraphFunction1D, x1: f64, r: f64, kernel: &Kernel) -> Result<f64> {
    check_rho_slope(f)?;
    if !(r > 0.0) {
        return Err(Error::Precondition(format!("radius must be positive, got {r}")));
    }
    Ok((f.convolve(kernel, x1, r) - kernel.c_phi * f.eval(x1)) / r)
}

/// Signed `𝔞_ρ − 𝔞_ψ` at `(x₁, f(x₁))`.
///
/// Both kernels give the same mass to every half-plane through the centre, so the
/// difference only sees the thin region between the graph and the horizontal line
/// through the centre, where `ρ − ψ` is supported near `|y₁ − x₁| ≈ r`.
pub fn rho_psi_gap(f: &GraphFunction1D, x1: f64, r: f64, kernel: &Kernel) -> Result<f64> {
    check_rho_slope(f)?;
    let x2 = f.eval(x1);
    let (p, q) = (kernel.plateau_end * r, kernel.support_end * r);
    // |v| ≤ 0.1·1.1r keeps √(u² + v²) > r only for |u| > r√(1 − 0.0121)
    let inner_edge = 0.99 * p;
    let mut breaks: Vec<f64> = Vec::new();
    for (lo, hi) in [(-q, -inner_edge), (inner_edge, q)] {
        breaks.push(lo);
        breaks.push(hi);
        for k in 1..8 {
            breaks.push(lo + (hi - lo) * k as f64 / 8.0);
        }
        for kx in f.knots() {
            let u = kx - x1;
            if u > lo && u < hi {
                breaks.push(u);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        if (w[0] < 0.0) != (w[1] <= 0.0) || w[1] - w[0] <= 0.0 {
            continue;
        }
        if w[0].abs() < inner_edge && w[1].abs() < inner_edge {
            continue;
        }
        for (u, wu) in gl_nodes(8, w[0], w[1]) {
            let top = f.eval(x1 + u) - x2;
            // ∫_{top}^{0} (ρ − ψ)(u, v) dv
            let mut col = 0.0;
            for (v, wv) in gl_nodes(8, top.min(0.0), top.max(0.0)) {
                let rho = kernel.phi(u / r) * kernel.phi(v / r);
                let psi = kernel.phi((u * u + v * v).sqrt() / r);
                col += wv * (rho - psi);
            }
            if top > 0.0 {
                col = -col;
            }
            total += wu * col;
        }
    }
    Ok(-total / (r * r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LipsRatio {
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
}

/// Nodes and weights for `∫_Γ (·) dℋ¹` over `x₁ ∈ [a − 1.1 r_max, b + 1.1 r_max]`.
pub fn graph_quadrature(f: &GraphFunction1D, reach: f64, panels_per_unit: f64) -> Vec<(f64, f64)> {
    let (a, b) = f.support();
    let mut out = Vec::new();
    let spans = [(a - reach, a), (a, b), (b, b + reach)];
    for (lo, hi) in spans {
        let n = ((hi - lo) * panels_per_unit).ceil().max(1.0) as usize;
        for (pl, ph) in panels(lo, hi, (hi - lo) / n as f64) {
            for (x, w) in gl_nodes(8, pl, ph) {
                let s = f.slope_at(x);
                out.push((x, w * (1.0 + s * s).sqrt()));
            }
        }
    }
    out
}

/// Default `x₁` panels per unit length for graph integrals.
pub const GRAPH_PANELS_PER_UNIT: f64 = 2.0;

/// `∫_Γ 𝒜_ψ² dℋ¹ / ‖f'‖₂²` with `𝒜_ψ² = ∫ 𝔞_ψ² dr/r` over `grid`.
pub fn lips_ratio(f: &GraphFunction1D, kernel: &Kernel, grid: &RadialGrid) -> Result<LipsRatio> {
    let denominator = f.deriv_l2_sq();
    if denominator == 0.0 {
        return Ok(LipsRatio { numerator: 0.0, denominator: 0.0, ratio: 1.0 });
    }
    let domain = f.domain()?;
    let quad = graph_quadrature(f, kernel.support_end * grid.r_max, GRAPH_PANELS_PER_UNIT);
    let mut terms = Vec::with_capacity(quad.len());
    for (x, w) in quad {
        let p = f.point_on_graph(x);
        let table = DefectTable::build(&domain, p, TABLE_FLOOR * grid.r_min, kernel.support_end * grid.r_max, TABLE_PER_OCTAVE)?;
        let sq: Vec<f64> = grid.nodes.iter().map(|&r| table.a_psi_signed(r, kernel).powi(2)).collect();
        terms.push(w * grid.integrate(&sq));
    }
    let numerator = pairwise_sum(&terms);
    Ok(LipsRatio { numerator, denominator, ratio: numerator / denominator })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffCheck {
    /// `∫_Γ |𝒜_ρ − 𝒜_ψ|² dℋ¹`.
    pub lhs: f64,
    pub slope_inf: f64,
    pub deriv_l2_sq: f64,
    /// `lhs / (‖f'‖∞⁴ ‖f'‖₂²)`.
    pub constant: f64,
}

/// `∫_Γ |𝒜_ρ − 𝒜_ψ|² dℋ¹` with `𝒜_ρ − 𝒜_ψ = ∫ d (2a_ρ − d) dr/r / (𝒜_ρ + 𝒜_ψ)`,
/// `d = 𝔞_ρ − 𝔞_ψ` signed.
pub fn lemdiff1(f: &GraphFunction1D, kernel: &Kernel, grid: &RadialGrid) -> Result<DiffCheck> {
    let slope_inf = f.max_slope();
    let deriv_l2_sq = f.deriv_l2_sq();
    let quad = graph_quadrature(f, kernel.support_end * grid.r_max, GRAPH_PANELS_PER_UNIT);
    let mut terms = Vec::with_capacity(quad.len());
    for (x, w) in quad {
        let mut rho_sq = Vec::with_capacity(grid.len());
        let mut cross = Vec::with_capacity(grid.len());
        for &r in &grid.nodes {
            let ar = graph_a_rho(f, x, r, kernel)?;
            let d = rho_psi_gap(f, x, r, kernel)?;
            rho_sq.push(ar * ar);
            cross.push(d * (2.0 * ar - d));
        }
        let a_rho2 = grid.integrate(&rho_sq);
        let gap = grid.integrate(&cross);
        let a_psi2 = (a_rho2 - gap).max(0.0);
        let denom = a_rho2.sqrt() + a_psi2.sqrt();
        let diff = if denom > 0.0 { gap / denom } else { 0.0 };
        terms.push(w * diff * diff);
    }
    let lhs = pairwise_sum(&terms);
    let scale = slope_inf.powi(4) * deriv_l2_sq;
    Ok(DiffCheck { lhs, slope_inf, deriv_l2_sq, constant: if scale > 0.0 { lhs / scale } else { 0.0 } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiscale::a_rho_area_signed;
    use crate::multiscale::{a_psi_area_signed};
    use crate::spectral::kernel_constants;

    fn bump(amp: f64) -> GraphFunction1D {
        let n = 129;
        let dx = 2.0 / (n - 1) as f64;
        let v = (0..n)
            .map(|k| {
                let x = -1.0 + k as f64 * dx;
                amp * (PI * x).cos().mul_add(0.5, 0.5) * (1.0 - x * x)
            })
            .collect::<Vec<_>>();
        let mut v = v;
        v[0] = 0.0;
        v[n - 1] = 0.0;
        GraphFunction1D::new(-1.0, dx, v).unwrap()
    }

    #[test]
    fn plancherel_matches_closed_form() {
        let f = bump(0.05);
        let c = kernel_constants(&Kernel::new());
        let e = plancherel_energy(&f, &c);
        let exact = c.tilde_c * f.deriv_l2_sq() / (4.0 * PI * PI);
        assert!((e - exact).abs() < 1e-12 * exact, "{e} vs {exact}");
    }

    #[test]
    fn zero_function_energies() {
        let f = GraphFunction1D::zero(-1.0, 0.1, 21);
        let k = Kernel::new();
        let g = RadialGrid::new(0.1, 10.0, 4).unwrap();
        assert_eq!(deviation_energy_direct(&f, &k, &g), 0.0);
        assert_eq!(taylor_deviation_energy(&f, &k, &g), 0.0);
        assert_eq!(plancherel_energy(&f, &kernel_constants(&k)), 0.0);
    }

    #[test]
    fn slope_guard() {
        let f = bump(0.5);
        assert!(matches!(graph_a_rho(&f, 0.0, 0.1, &Kernel::new()), Err(Error::SlopeTooLarge { .. })));
    }

    #[test]
    fn rho_identity_and_gap_against_area() {
        let f = bump(0.02);
        let k = Kernel::new();
        let d = f.domain().unwrap();
        for (x1, r) in [(0.1, 0.2), (-0.4, 0.05), (0.8, 0.5)] {
            let one_d = graph_a_rho(&f, x1, r, &k).unwrap();
            let p = f.point_on_graph(x1);
            let two_d = a_rho_area_signed(&d, p, r, &k).unwrap();
            assert!((one_d - two_d).abs() < 1e-7, "{x1} {r}: {one_d} vs {two_d}");
            let gap = rho_psi_gap(&f, x1, r, &k).unwrap();
            let psi = a_psi_area_signed(&d, p, r, &k).unwrap();
            assert!((gap - (two_d - psi)).abs() < 1e-7 + 1e-3 * gap.abs(), "{gap} vs {}", two_d - psi);
        }
    }
}

//! `dr/r` energies over a [`RadialGrid`], built on a shared per-point table of
//! circle profiles.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ArcLengths, PlanarDomain, Point, ProfileScratch};
use crate::kernel::Kernel;
use crate::quad::{pairwise_sum, RadialGrid};

use super::coeffs::{epsilon_coeff, GAUSS_CUTOFF};
use super::strip::beta_inf;

/// Log-spaced profile nodes per octave in a [`DefectTable`].
pub const TABLE_PER_OCTAVE: usize = 64;

/// Lower end of a table relative to the smallest radius it serves.
pub const TABLE_FLOOR: f64 = 1e-4;

/// Circle profiles of one centre at log-midpoint radii, reused across scales.
#[derive(Debug, Clone)]
pub struct DefectTable {
    pub center: Point,
    pub s_lo: f64,
    pub s_hi: f64,
    /// Log width of every cell.
    pub h: f64,
    /// Ascending cell midpoints.
    pub nodes: Vec<f64>,
    /// Radius actually evaluated (differs from the node only after tangency jitter).
    pub used: Vec<f64>,
    pub lengths: Vec<ArcLengths>,
}

impl DefectTable {
    pub fn build(domain: &PlanarDomain, center: Point, s_lo: f64, s_hi: f64, per_octave: usize) -> Result<Self> {
        if !(s_lo > 0.0 && s_hi > s_lo) {
            return Err(Error::InvalidInput(format!("table range must satisfy 0 < lo < hi (got {s_lo}, {s_hi})")));
        }
        let span = (s_hi / s_lo).ln();
        let cells = ((per_octave as f64 * span / std::f64::consts::LN_2) - 1e-9).ceil().max(1.0) as usize;
        let h = span / cells as f64;
        let mut scratch = ProfileScratch::default();
        let mut nodes = Vec::with_capacity(cells);
        let mut used = Vec::with_capacity(cells);
        let mut lengths = Vec::with_capacity(cells);
        for k in 0..cells {
            let s = s_lo * ((k as f64 + 0.5) * h).exp();
            let (ss, l) = domain.arc_lengths_jittered(center, s, &mut scratch)?;
            nodes.push(s);
            used.push(ss);
            lengths.push(l);
        }
        Ok(DefectTable { center, s_lo, s_hi, h, nodes, used, lengths })
    }

    /// `D` at node `j`.
    pub fn defect(&self, j: usize) -> f64 {
        self.lengths[j].defect(self.used[j])
    }

    /// `∫₀^{s_hi} w(s) D(s) ds`, taking `D` linear below the first node and `w`
    /// negligible beyond `cutoff`.
    pub fn integrate<W: Fn(f64) -> f64>(&self, cutoff: f64, w: W) -> f64 {
        let s0 = self.nodes[0];
        let head = w(0.0) * self.defect(0) / s0 * 0.5 * self.s_lo * self.s_lo;
        let mut terms = Vec::with_capacity(self.nodes.len() + 1);
        terms.push(head);
        for (j, &s) in self.nodes.iter().enumerate() {
            if s > cutoff {
                break;
            }
            terms.push(self.h * s * w(s) * self.defect(j));
        }
        pairwise_sum(&terms)
    }

    /// Signed `𝔞_ψ(center, r)`; needs `s_hi ≥ 1.1 r`.
    pub fn a_psi_signed(&self, r: f64, kernel: &Kernel) -> f64 {
        debug_assert!(self.s_hi >= kernel.support_end * r * (1.0 - 1e-12));
        self.integrate(kernel.support_end * r, |s| kernel.phi(s / r)) / (r * r)
    }

    /// `α⁺(center, r)`; the part beyond `s_hi` uses the label fraction of the last node.
    pub fn alpha_plus(&self, r: f64) -> f64 {
        let body = self.integrate(GAUSS_CUTOFF * r, |s| (-(s * s) / (r * r)).exp());
        let last = self.nodes.len() - 1;
        let edge = self.s_hi.min(GAUSS_CUTOFF * r);
        let frac = self.lengths[last].plus_total / (2.0 * PI * self.used[last]);
        let tail = PI * (1.0 - 2.0 * frac) * 0.5 * r * r * (-(edge * edge) / (r * r)).exp();
        ((body + tail) / (r * r)).abs()
    }
}

/// `∫ ε(x, r)² dr/r` over the grid.
pub fn carleson_energy(domain: &PlanarDomain, x: Point, grid: &RadialGrid) -> Result<f64> {
    let vals = epsilon_profile(domain, x, grid)?;
    let sq: Vec<f64> = vals.iter().map(|e| e * e).collect();
    Ok(grid.integrate(&sq))
}

/// `ε(x, r_k)` at every grid node.
pub fn epsilon_profile(domain: &PlanarDomain, x: Point, grid: &RadialGrid) -> Result<Vec<f64>> {
    let mut scratch = ProfileScratch::default();
    grid.nodes
        .iter()
        .map(|&r| domain.arc_lengths_jittered(x, r, &mut scratch).map(|(rr, l)| l.epsilon(rr)))
        .collect()
}

/// `∫ 𝔞_ψ(x, r)² dr/r` over the grid.
pub fn a_psi_energy(domain: &PlanarDomain, x: Point, grid: &RadialGrid, kernel: &Kernel) -> Result<f64> {
    let table = DefectTable::build(domain, x, TABLE_FLOOR * grid.r_min, kernel.support_end * grid.r_max, TABLE_PER_OCTAVE)?;
    let sq: Vec<f64> = grid.nodes.iter().map(|&r| table.a_psi_signed(r, kernel).powi(2)).collect();
    Ok(grid.integrate(&sq))
}

/// `∫ α⁺(x, r)² dr/r` over the grid.
pub fn alpha_energy(domain: &PlanarDomain, x: Point, grid: &RadialGrid) -> Result<f64> {
    let table = DefectTable::build(domain, x, TABLE_FLOOR * grid.r_min, GAUSS_CUTOFF * grid.r_max, TABLE_PER_OCTAVE)?;
    let sq: Vec<f64> = grid.nodes.iter().map(|&r| table.alpha_plus(r).powi(2)).collect();
    Ok(grid.integrate(&sq))
}

/// Octave radii `r_max, r_max/2, …` down to `r_min`.
pub fn octave_scales(grid: &RadialGrid) -> Vec<f64> {
    let mut out = Vec::new();
    let mut r = grid.r_max;
    while r >= grid.r_min * (1.0 - 1e-12) {
        out.push(r);
        r *= 0.5;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientReport {
    pub point: Point,
    pub eps_energy: f64,
    /// `(r, β∞(B(x, r)))` at the octave scales; `NaN` when the ball misses `Γ`.
    pub beta_profile: Vec<(f64, f64)>,
    pub alpha_energy: f64,
    pub a_psi_energy: f64,
}

/// All four multiscale quantities at one point.
pub fn coefficient_report(domain: &PlanarDomain, x: Point, grid: &RadialGrid, kernel: &Kernel) -> Result<CoefficientReport> {
    let eps_energy = carleson_energy(domain, x, grid)?;
    let table = DefectTable::build(domain, x, TABLE_FLOOR * grid.r_min, GAUSS_CUTOFF * grid.r_max, TABLE_PER_OCTAVE)?;
    let psi: Vec<f64> = grid.nodes.iter().map(|&r| table.a_psi_signed(r, kernel).powi(2)).collect();
    let alpha: Vec<f64> = grid.nodes.iter().map(|&r| table.alpha_plus(r).powi(2)).collect();
    let mut beta_profile = Vec::new();
    for r in octave_scales(grid) {
        let b = match beta_inf(domain, x, r) {
            Ok(b) => b.beta,
            Err(Error::EmptyIntersection) => f64::NAN,
            Err(e) => return Err(e),
        };
        beta_profile.push((r, b));
    }
    Ok(CoefficientReport {
        point: x,
        eps_energy,
        beta_profile,
        alpha_energy: grid.integrate(&alpha),
        a_psi_energy: grid.integrate(&psi),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lem1Check {
    /// `∫_{r_min}^{R} 𝔞_ψ² dr/r`.
    pub lhs: f64,
    /// `∫_{r_min}^{MR} ε² dr/r`.
    pub rhs_energy: f64,
    /// `2 ∫_M^∞ φ(t) t (log⁺(t/M))^{1/2} dt`.
    pub tail: f64,
    pub ratio: f64,
    /// Largest `(|D(s)| − s ε(x, s)) / s` over the profile nodes; nonpositive when the
    /// pointwise bound holds.
    pub pointwise_excess: f64,
}

/// Both sides of the `𝔞_ψ ≲ ε` comparison at one point.
pub fn lem1_check(
    domain: &PlanarDomain,
    x: Point,
    big_r: f64,
    m: f64,
    kernel: &Kernel,
    r_min: f64,
    per_octave: usize,
) -> Result<Lem1Check> {
    if m < 1.0 {
        return Err(Error::Precondition(format!("M must be at least 1, got {m}")));
    }
    let lhs_grid = RadialGrid::new(r_min, big_r, per_octave)?;
    let rhs_grid = RadialGrid::new(r_min, m * big_r, per_octave)?;
    let table = DefectTable::build(domain, x, TABLE_FLOOR * r_min, kernel.support_end * big_r, TABLE_PER_OCTAVE)?;
    let psi: Vec<f64> = lhs_grid.nodes.iter().map(|&r| table.a_psi_signed(r, kernel).powi(2)).collect();
    let lhs = lhs_grid.integrate(&psi);
    let rhs_energy = carleson_energy(domain, x, &rhs_grid)?;
    let tail = kernel.lem1_tail(m);
    let mut excess = f64::NEG_INFINITY;
    for (j, l) in table.lengths.iter().enumerate() {
        let s = table.used[j];
        excess = excess.max((l.defect(s).abs() - s * l.epsilon(s)) / s);
    }
    Ok(Lem1Check { lhs, rhs_energy, tail, ratio: lhs / (rhs_energy + tail + 1e-300), pointwise_excess: excess })
}

/// Single-scale `ε` values for the `ε ≲ β∞` comparison: `max ε(x, r')` over
/// `r' ∈ (r/2, r)` sampled at `samples` points.
pub fn max_epsilon_on_annulus(domain: &PlanarDomain, x: Point, r: f64, samples: usize) -> Result<f64> {
    let mut m: f64 = 0.0;
    for k in 0..samples {
        let rp = r * (0.5 + 0.5 * (k as f64 + 0.5) / samples as f64);
        m = m.max(epsilon_coeff(domain, x, rp)?);
    }
    Ok(m)
}

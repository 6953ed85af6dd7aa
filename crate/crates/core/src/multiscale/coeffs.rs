//! Single-scale coefficients: `ε`, `α⁺`, `𝔞_ψ` and the product-kernel `𝔞_ρ`.
//!
//! The polar forms integrate the half-plane defect `D(s) = πs − ℋ¹(∂B(x,s) ∩ Ω⁺)`
//! panel by panel between the critical radii of the polyline (distances to
//! vertices and to interior feet of segments), where `D` is smooth up to a
//! square-root onset at the left end of a panel.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::area::{plus_integral, KernelShape};
use crate::geometry::{PlanarDomain, Point, ProfileScratch};
use crate::kernel::Kernel;
use crate::quad::gl_nodes;

/// Gaussian window radius, in units of `r`.
pub const GAUSS_CUTOFF: f64 = 6.0;

/// `ε(x, r)` with the tangency jitter policy.
pub fn epsilon_coeff(domain: &PlanarDomain, x: Point, r: f64) -> Result<f64> {
    let mut scratch = ProfileScratch::default();
    let (rr, l) = domain.arc_lengths_jittered(x, r, &mut scratch)?;
    Ok(l.epsilon(rr))
}

/// Distances from `x` at which the circle–polyline incidence pattern changes, in `(0, s_max)`.
pub fn critical_radii(domain: &PlanarDomain, x: Point, s_max: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let lo = x - Point::new(s_max, s_max);
    let hi = x + Point::new(s_max, s_max);
    domain.for_each_segment_in_box(lo, hi, |s| {
        for v in [s.a, s.b] {
            let d = v.dist(x);
            if d > 0.0 && d < s_max {
                out.push(d);
            }
        }
        let e = s.b - s.a;
        let len2 = e.norm2();
        if len2 > 0.0 {
            let t = (x - s.a).dot(e) / len2;
            if t > 0.0 && t < 1.0 {
                let d = (s.a + e * t).dist(x);
                if d > 0.0 && d < s_max {
                    out.push(d);
                }
            }
        }
    });
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| *a - *b <= 1e-14 * s_max);
    out
}

/// `∫₀^{s_max} w(s) D(s) ds` over panels split at the critical radii, at `extra`
/// and at most `max_panel` wide; each panel uses `s = a + (b − a)τ²`.
pub fn polar_defect_integral<W: Fn(f64) -> f64>(
    domain: &PlanarDomain,
    x: Point,
    s_max: f64,
    extra: &[f64],
    max_panel: f64,
    weight: W,
) -> Result<f64> {
    let mut breaks = critical_radii(domain, x, s_max);
    breaks.extend(extra.iter().copied().filter(|&b| b > 0.0 && b < s_max));
    breaks.push(0.0);
    breaks.push(s_max);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut scratch = ProfileScratch::default();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let pieces = ((w[1] - w[0]) / max_panel).ceil().max(1.0) as usize;
        for k in 0..pieces {
            let a = w[0] + (w[1] - w[0]) * k as f64 / pieces as f64;
            let b = w[0] + (w[1] - w[0]) * (k + 1) as f64 / pieces as f64;
            let mut panel = 0.0;
            for (tau, wt) in gl_nodes(8, 0.0, 1.0) {
                let s = a + (b - a) * tau * tau;
                let jac = 2.0 * (b - a) * tau;
                let (ss, l) = domain.arc_lengths_jittered(x, s, &mut scratch)?;
                let defect = PI * ss - l.plus_total;
                panel += wt * jac * weight(s) * defect;
            }
            total += panel;
        }
    }
    Ok(total)
}

/// Signed `c_ψ − r⁻² ∫_{Ω⁺} ψ((y − x)/r) dy` by the polar identity.
pub fn a_psi_signed(domain: &PlanarDomain, x: Point, r: f64, kernel: &Kernel) -> Result<f64> {
    check_radius(r)?;
    let (p, q) = (kernel.plateau_end * r, kernel.support_end * r);
    let extra: Vec<f64> = (0..=4).map(|k| p + (q - p) * k as f64 / 4.0).collect();
    let v = polar_defect_integral(domain, x, q, &extra, 0.05 * r, |s| kernel.phi(s / r))?;
    Ok(v / (r * r))
}

/// `𝔞_ψ(x, r)` by the polar identity.
pub fn a_psi(domain: &PlanarDomain, x: Point, r: f64, kernel: &Kernel) -> Result<f64> {
    Ok(a_psi_signed(domain, x, r, kernel)?.abs())
}

/// Largest area-quadrature panel in units of `r`.
pub const AREA_PANEL: f64 = 1.0 / 8.0;

/// Signed `𝔞_ψ` from the two-dimensional area integral of `ψ` over `Ω⁺`.
pub fn a_psi_area_signed(domain: &PlanarDomain, x: Point, r: f64, kernel: &Kernel) -> Result<f64> {
    check_radius(r)?;
    let shape = KernelShape::Radial { radii: vec![kernel.plateau_end * r, kernel.support_end * r] };
    let mass = plus_integral(domain, x, kernel.support_end * r, &shape, AREA_PANEL * r, |u, v| {
        kernel.phi((u * u + v * v).sqrt() / r)
    });
    Ok(kernel.c_psi - mass / (r * r))
}

/// Signed `c_ρ − r⁻² ∫_{Ω⁺} ρ((y − x)/r) dy` for the product kernel `ρ(y) = φ(y₁)φ(y₂)`,
/// with `c_ρ = c_φ² / 2`.
pub fn a_rho_area_signed(domain: &PlanarDomain, x: Point, r: f64, kernel: &Kernel) -> Result<f64> {
    check_radius(r)?;
    let shape = KernelShape::Product { offsets: vec![kernel.plateau_end * r, kernel.support_end * r] };
    let mass = plus_integral(domain, x, kernel.support_end * r, &shape, AREA_PANEL * r, |u, v| {
        kernel.phi(u / r) * kernel.phi(v / r)
    });
    Ok(0.5 * kernel.c_phi * kernel.c_phi - mass / (r * r))
}

/// `α⁺(x, r)` by the polar identity over `[0, 6r]` plus the closed-form Gaussian tail.
pub fn alpha_plus(domain: &PlanarDomain, x: Point, r: f64) -> Result<f64> {
    check_radius(r)?;
    let s_max = GAUSS_CUTOFF * r;
    let body = polar_defect_integral(domain, x, s_max, &[], 0.25 * r, |s| (-(s * s) / (r * r)).exp())?;
    Ok((body + gaussian_tail(domain, x, r)?) / (r * r)).map(f64::abs)
}

/// `∫_{6r}^∞ e^{−s²/r²} D(s) ds` assuming the label fraction of `∂B(x, 6r)` persists.
pub(crate) fn gaussian_tail(domain: &PlanarDomain, x: Point, r: f64) -> Result<f64> {
    let s = GAUSS_CUTOFF * r;
    let mut scratch = ProfileScratch::default();
    let (ss, l) = domain.arc_lengths_jittered(x, s, &mut scratch)?;
    let plus_fraction = l.plus_total / (2.0 * PI * ss);
    // ∫_{s}^∞ e^{−t²/r²} t dt = r²/2 · e^{−s²/r²}
    Ok(PI * (1.0 - 2.0 * plus_fraction) * 0.5 * r * r * (-(s * s) / (r * r)).exp())
}

/// `α⁺` from the two-dimensional Gaussian area integral over `Ω⁺ ∩ [x − 6r, x + 6r]²`.
pub fn alpha_plus_area(domain: &PlanarDomain, x: Point, r: f64) -> Result<f64> {
    check_radius(r)?;
    let shape = KernelShape::Radial { radii: vec![] };
    let mass = plus_integral(domain, x, GAUSS_CUTOFF * r, &shape, 0.5 * r, |u, v| (-(u * u + v * v) / (r * r)).exp());
    Ok((PI / 2.0 - mass / (r * r)).abs())
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("radius must be positive, got {r}")))
    }
}

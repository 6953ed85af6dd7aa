//! Fourier-side constants of the kernel profile, with `φ̂(ξ) = ∫ φ(t) e^{−2πiξt} dt`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::Kernel;

/// Symmetric samples `φ(k·dt)`, `k = −n..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile1D {
    pub dt: f64,
    pub support: f64,
    pub samples: Vec<f64>,
}

impl Profile1D {
    pub fn from_kernel(kernel: &Kernel, dt: f64) -> Self {
        let n = (kernel.support_end / dt).ceil() as i64;
        let samples = (-n..=n).map(|k| kernel.phi(k as f64 * dt)).collect();
        Profile1D { dt, support: kernel.support_end, samples }
    }

    pub fn half_len(&self) -> usize {
        (self.samples.len() - 1) / 2
    }

    fn check_even(&self) -> Result<()> {
        let n = self.samples.len();
        if n % 2 == 0 {
            return Err(Error::InvalidInput("profile needs an odd number of symmetric samples".into()));
        }
        let worst = (0..n / 2).map(|k| (self.samples[k] - self.samples[n - 1 - k]).abs()).fold(0.0, f64::max);
        if worst > 1e-12 {
            return Err(Error::NonEven(worst));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralConstants {
    /// `∫ φ = φ̂(0)`.
    pub c_phi: f64,
    /// `∫₀^∞ |φ̂(t) − φ̂(0)|² dt / t³`.
    pub tilde_c: f64,
    /// `∫ t² φ(t) dt`, fixing `φ̂(t) − φ̂(0) ≈ −2π² m₂ t²` near zero.
    pub second_moment: f64,
    pub fft_n: usize,
}

/// Log-grid nodes per octave for the `dt/t³` integral.
const NODES_PER_OCTAVE: usize = 64;

/// Below this frequency the quadratic closed form replaces the quadrature.
const NEAR_ZERO: f64 = 1e-3;

/// Upper cutoff as a fraction of the Nyquist frequency; the rest is `φ̂(0)²/(2T²)`.
const CUTOFF_FRACTION: f64 = 0.25;

/// `c_φ` and `c̃_φ` from an FFT of the sampled profile.
pub fn spectral_constants(profile: &Profile1D, fft_n: usize) -> Result<SpectralConstants> {
    if !fft_n.is_power_of_two() || fft_n < 1 << 14 {
        return Err(Error::InvalidInput(format!("fft size must be a power of two at least 16384, got {fft_n}")));
    }
    profile.check_even()?;
    let n = profile.half_len();
    if 2 * n + 1 > fft_n {
        return Err(Error::InvalidInput("fft size smaller than the profile".into()));
    }
    let dt = profile.dt;
    let mut buf = vec![Complex::new(0.0, 0.0); fft_n];
    for (i, &v) in profile.samples.iter().enumerate() {
        let k = i as i64 - n as i64;
        buf[k.rem_euclid(fft_n as i64) as usize] = Complex::new(v, 0.0);
    }
    FftPlanner::new().plan_fft_forward(fft_n).process(&mut buf);
    let hat: Vec<f64> = buf[..fft_n / 2].iter().map(|c| c.re * dt).collect();
    let dxi = 1.0 / (fft_n as f64 * dt);
    let c_phi = hat[0];
    let m2: f64 = profile
        .samples
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let t = (i as f64 - n as f64) * dt;
            t * t * v * dt
        })
        .sum();
    let g0 = -2.0 * PI * PI * m2;
    // G(ξ) = (φ̂(ξ) − φ̂(0)) / ξ², even and smooth, interpolated on the FFT grid
    let g = |m: i64| -> f64 {
        let m = m.unsigned_abs() as usize;
        if m == 0 {
            g0
        } else {
            let xi = m as f64 * dxi;
            (hat[m] - c_phi) / (xi * xi)
        }
    };
    let interp = |t: f64| -> f64 {
        let u = t / dxi;
        let m = u.floor() as i64;
        let s = u - m as f64;
        // cubic Lagrange through m−1, m, m+1, m+2
        let (p0, p1, p2, p3) = (g(m - 1), g(m), g(m + 1), g(m + 2));
        -s * (s - 1.0) * (s - 2.0) / 6.0 * p0 + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * p1
            - (s + 1.0) * s * (s - 2.0) / 2.0 * p2
            + (s + 1.0) * s * (s - 1.0) / 6.0 * p3
    };
    let nyquist = 0.5 / dt;
    let top = CUTOFF_FRACTION * nyquist;
    let span = (top / NEAR_ZERO).ln();
    let cells = (NODES_PER_OCTAVE as f64 * span / std::f64::consts::LN_2).ceil() as usize;
    let h = span / cells as f64;
    let mut terms = Vec::with_capacity(cells + 2);
    // |φ̂(t) − φ̂(0)|² / t³ = G(t)² t
    terms.push(g0 * g0 * NEAR_ZERO * NEAR_ZERO / 2.0);
    for k in 0..cells {
        let t = NEAR_ZERO * ((k as f64 + 0.5) * h).exp();
        let gt = interp(t);
        // dt = t d(ln t)
        terms.push(h * gt * gt * t * t);
    }
    terms.push(c_phi * c_phi / (2.0 * top * top));
    let tilde_c = crate::quad::pairwise_sum(&terms);
    Ok(SpectralConstants { c_phi, tilde_c, second_moment: m2, fft_n })
}

/// Default sampling step of the kernel profile.
pub const PROFILE_DT: f64 = 1.0 / 256.0;

/// Default FFT length.
pub const DEFAULT_FFT_N: usize = 1 << 15;

/// Constants of the fixed [`Kernel`] at the default resolution.
pub fn kernel_constants(kernel: &Kernel) -> SpectralConstants {
    spectral_constants(&Profile1D::from_kernel(kernel, PROFILE_DT), DEFAULT_FFT_N).expect("default resolution is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_constants_are_sane() {
        let k = Kernel::new();
        let c = kernel_constants(&k);
        assert!((c.c_phi - k.c_phi).abs() < 1e-8, "{}", c.c_phi);
        assert!(c.tilde_c > 0.0 && c.tilde_c.is_finite());
        let c2 = spectral_constants(&Profile1D::from_kernel(&k, PROFILE_DT), 2 * DEFAULT_FFT_N).unwrap();
        assert!((c2.tilde_c / c.tilde_c - 1.0).abs() < 5e-3);
    }

    #[test]
    fn rejects_small_or_odd_sizes() {
        let p = Profile1D::from_kernel(&Kernel::new(), PROFILE_DT);
        assert!(spectral_constants(&p, 1000).is_err());
        assert!(spectral_constants(&p, 1 << 10).is_err());
    }

    #[test]
    fn detects_asymmetry() {
        let mut p = Profile1D::from_kernel(&Kernel::new(), PROFILE_DT);
        p.samples[3] += 1e-6;
        assert!(matches!(spectral_constants(&p, 1 << 14), Err(Error::NonEven(_))));
    }
}

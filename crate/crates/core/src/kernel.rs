//! The fixed radial bump profile `φ`: equal to 1 on `[0, 1]`, 0 beyond `1.1`,
//! joined by the smooth step `1 / (1 + exp(1/u − 1/(1−u)))`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::quad::gl_integrate;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kernel {
    pub plateau_end: f64,
    pub support_end: f64,
    /// `∫_ℝ φ`.
    pub c_phi: f64,
    /// `π ∫_0^∞ φ(t) t dt`, the half-plane mass of `ψ(x) = φ(|x|)`.
    pub c_psi: f64,
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::new()
    }
}

/// Smooth step on `u ∈ [0, 1]`: 0 at `u = 0`, 1 at `u = 1`, flat to all orders at both ends.
#[inline]
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let z = 1.0 / u - 1.0 / (1.0 - u);
        1.0 / (1.0 + z.exp())
    }
}

/// Derivative of [`smooth_step`].
#[inline]
pub fn smooth_step_deriv(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        let b = smooth_step(u);
        b * (1.0 - b) * (1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u)))
    }
}

impl Kernel {
    pub fn new() -> Self {
        let mut k = Kernel { plateau_end: 1.0, support_end: 1.1, c_phi: 0.0, c_psi: 0.0 };
        let (a, b) = (k.plateau_end, k.support_end);
        k.c_phi = 2.0 * (a + gl_integrate(a, b, 16, 32, |t| k.phi(t)));
        k.c_psi = PI * (0.5 * a * a + gl_integrate(a, b, 16, 32, |t| k.phi(t) * t));
        k
    }

    #[inline]
    fn width(&self) -> f64 {
        self.support_end - self.plateau_end
    }

    /// `φ(t)`, even in `t`.
    #[inline]
    pub fn phi(&self, t: f64) -> f64 {
        let t = t.abs();
        if t <= self.plateau_end {
            1.0
        } else if t >= self.support_end {
            0.0
        } else {
            smooth_step((self.support_end - t) / self.width())
        }
    }

    /// `φ'(t)`, odd in `t`.
    #[inline]
    pub fn phi_deriv(&self, t: f64) -> f64 {
        let a = t.abs();
        if a <= self.plateau_end || a >= self.support_end {
            return 0.0;
        }
        let d = -smooth_step_deriv((self.support_end - a) / self.width()) / self.width();
        if t < 0.0 {
            -d
        } else {
            d
        }
    }

    /// Tail term of the ε-comparison inequality, `2 ∫_M^∞ φ(t) t (log⁺(t/M))^{1/2} dt`.
    pub fn lem1_tail(&self, m: f64) -> f64 {
        if m >= self.support_end {
            return 0.0;
        }
        let lo = m.max(self.plateau_end.min(m));
        2.0 * gl_integrate(lo, self.support_end, 32, 32, |t| {
            if t <= m {
                0.0
            } else {
                self.phi(t) * t * (t / m).ln().sqrt()
            }
        })
    }
}

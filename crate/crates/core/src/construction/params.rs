use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Thresholds and root ball of the stopping-time construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    /// Density threshold for good balls.
    pub theta: f64,
    /// Angle budget against the root line.
    pub alpha: f64,
    /// Flatness parameter of the hypotheses; only scales reported constants.
    pub flat_param: f64,
    /// Lower density of the root ball.
    pub c0: f64,
    pub root_center: Point,
    pub root_radius: f64,
    pub radii_per_octave: usize,
    /// Octaves of the radius ladder below `50R`.
    pub ladder_octaves: usize,
}

/// Ceiling of the radius ladder in units of `R`.
pub const LADDER_TOP: f64 = 50.0;

impl Default for ConstructionParams {
    fn default() -> Self {
        ConstructionParams {
            theta: 0.005,
            alpha: 0.08,
            flat_param: 0.004,
            c0: 0.5,
            root_center: Point::new(0.0, 0.0),
            root_radius: 1.0,
            radii_per_octave: 8,
            ladder_octaves: 24,
        }
    }
}

impl ConstructionParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if !(self.theta > 0.0 && self.theta < self.c0 && self.c0 <= 1.0) {
            return bad(format!("need 0 < theta < c0 <= 1 (theta={}, c0={})", self.theta, self.c0));
        }
        if !(self.alpha > 0.0 && self.alpha <= 0.1) {
            return bad(format!("need 0 < alpha <= 0.1 (alpha={})", self.alpha));
        }
        if !(self.flat_param > 0.0 && self.flat_param < self.theta) {
            return bad(format!("need 0 < flat_param < theta (flat_param={})", self.flat_param));
        }
        if !(self.root_radius > 0.0 && self.root_radius.is_finite() && self.root_center.is_finite()) {
            return bad("root ball must have finite centre and positive radius".into());
        }
        if self.radii_per_octave < 1 || self.ladder_octaves < 1 {
            return bad("ladder needs at least one radius per octave and one octave".into());
        }
        Ok(())
    }

    /// Descending radii `50R · 2^{−k/p}`, `k = 0..=octaves·p`.
    pub fn ladder(&self) -> Vec<f64> {
        let p = self.radii_per_octave;
        let top = LADDER_TOP * self.root_radius;
        (0..=self.ladder_octaves * p).map(|k| top * 2f64.powf(-(k as f64) / p as f64)).collect()
    }

    pub fn ladder_floor(&self) -> f64 {
        LADDER_TOP * self.root_radius * 2f64.powi(-(self.ladder_octaves as i32))
    }
}

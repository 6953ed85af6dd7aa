//! Decomposition of a circle `∂B(x, r)` into arcs lying in `Ω⁺`, `Ω⁻` or on `Γ`.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::domain::{PlanarDomain, RegionLabel};
use super::point::{Point, Segment};
use crate::error::{Error, Result};

/// Relative tolerance for declaring a circle tangent to a boundary segment.
pub const TANGENCY_TOL: f64 = 1e-10;
/// Multiplicative radius jitter applied after a tangency.
pub const JITTER: f64 = 1e-7;
pub const MAX_JITTER_RETRIES: usize = 3;

const ANGLE_MERGE: f64 = 1e-12;

/// Angular interval `[start, end)` of a circle, `end` possibly exceeding `2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
    pub label: RegionLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleProfile {
    pub center: Point,
    pub radius: f64,
    pub arcs: Vec<Arc>,
    /// `ℋ¹(∂B ∩ Ω⁺)`.
    pub len_plus_total: f64,
    /// Length of the longest arc in `Ω⁺` (0 if none).
    pub len_i_plus: f64,
    /// Length of the longest arc in `Ω⁻` (0 if none).
    pub len_i_minus: f64,
}

/// The three lengths every coefficient needs, without the arc list.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ArcLengths {
    pub plus_total: f64,
    pub longest_plus: f64,
    pub longest_minus: f64,
}

impl ArcLengths {
    /// `πs − ℋ¹(∂B(x,s) ∩ Ω⁺)`.
    pub fn defect(&self, s: f64) -> f64 {
        PI * s - self.plus_total
    }

    /// Normalized half-plane defect `ε(x, s)`.
    pub fn epsilon(&self, s: f64) -> f64 {
        ((PI * s - self.longest_plus).abs().max((PI * s - self.longest_minus).abs())) / s
    }
}

/// Reusable buffers for repeated profile evaluations.
#[derive(Debug, Default)]
pub struct ProfileScratch {
    ids: Vec<u32>,
    segs: Vec<Segment>,
    angles: Vec<f64>,
}

impl PlanarDomain {
    /// Full arc decomposition of `∂B(x, r)`.
    pub fn circle_profile(&self, x: Point, r: f64) -> Result<CircleProfile> {
        let mut scratch = ProfileScratch::default();
        let mut arcs = Vec::new();
        let lengths = self.walk_arcs(x, r, &mut scratch, |a| arcs.push(a))?;
        Ok(CircleProfile {
            center: x,
            radius: r,
            arcs,
            len_plus_total: lengths.plus_total,
            len_i_plus: lengths.longest_plus,
            len_i_minus: lengths.longest_minus,
        })
    }

    /// Arc lengths of `∂B(x, r)` reusing `scratch`.
    pub fn arc_lengths(&self, x: Point, r: f64, scratch: &mut ProfileScratch) -> Result<ArcLengths> {
        self.walk_arcs(x, r, scratch, |_| {})
    }

    /// Arc lengths with the jitter policy: on tangency retry with `r (1 + 1e-7)^k`.
    /// Returns the radius actually used.
    pub fn arc_lengths_jittered(&self, x: Point, r: f64, scratch: &mut ProfileScratch) -> Result<(f64, ArcLengths)> {
        let mut rr = r;
        let mut last = None;
        for _ in 0..=MAX_JITTER_RETRIES {
            match self.arc_lengths(x, rr, scratch) {
                Ok(l) => return Ok((rr, l)),
                Err(e @ Error::DegenerateTangency { .. }) => {
                    last = Some(e);
                    rr *= 1.0 + JITTER;
                }
                Err(e) => return Err(e),
            }
        }
        Err(last.unwrap())
    }

    /// `ℋ¹(∂B(x, s) ∩ Ω⁺)`.
    pub fn boundary_arclength_in_plus(&self, x: Point, s: f64) -> Result<f64> {
        let mut scratch = ProfileScratch::default();
        Ok(self.arc_lengths(x, s, &mut scratch)?.plus_total)
    }

    fn walk_arcs<F: FnMut(Arc)>(&self, c: Point, r: f64, scratch: &mut ProfileScratch, mut emit: F) -> Result<ArcLengths> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Precondition(format!("radius must be positive, got {r}")));
        }
        let ProfileScratch { ids, segs, angles } = scratch;
        self.segments_near_circle(c, r, ids, segs);
        angles.clear();
        for s in segs.iter() {
            intersect_circle(*s, c, r, angles)?;
        }
        angles.sort_unstable_by(f64::total_cmp);
        angles.dedup_by(|b, a| *b - *a < ANGLE_MERGE);
        if angles.len() > 1 && angles[0] + TAU - angles[angles.len() - 1] < ANGLE_MERGE {
            angles.pop();
        }

        let mut out = ArcLengths::default();
        let mut record = |start: f64, end: f64, label: RegionLabel, out: &mut ArcLengths| {
            let len = (end - start) * r;
            match label {
                RegionLabel::InPlus => {
                    out.plus_total += len;
                    out.longest_plus = out.longest_plus.max(len);
                }
                RegionLabel::InMinus => out.longest_minus = out.longest_minus.max(len),
                RegionLabel::OnGamma => {}
            }
            emit(Arc { start, end, label });
        };

        if angles.is_empty() {
            let label = self.classify(c + Point::new(r, 0.0));
            record(0.0, TAU, label, &mut out);
            return Ok(out);
        }
        let m = angles.len();
        for k in 0..m {
            let start = angles[k];
            let end = if k + 1 < m { angles[k + 1] } else { angles[0] + TAU };
            let mid = 0.5 * (start + end);
            let label = self.classify(c + Point::polar(r, mid));
            record(start, end, label, &mut out);
        }
        Ok(out)
    }
}

fn intersect_circle(s: Segment, c: Point, r: f64, out: &mut Vec<f64>) -> Result<()> {
    let d = s.b - s.a;
    let f = s.a - c;
    let a = d.norm2();
    if a == 0.0 {
        return Ok(());
    }
    // cheap bounding-box rejection
    let (lo, hi) = s.bbox();
    if lo.x > c.x + r || hi.x < c.x - r || lo.y > c.y + r || hi.y < c.y - r {
        return Ok(());
    }
    let b = f.dot(d);
    let t_foot = -b / a;
    let foot = f + d * t_foot;
    let h = foot.norm();
    if (h - r).abs() <= TANGENCY_TOL * r && (-1e-9..=1.0 + 1e-9).contains(&t_foot) {
        return Err(Error::DegenerateTangency { radius: r, angle: foot.y.atan2(foot.x).rem_euclid(TAU) });
    }
    if h > r {
        return Ok(());
    }
    // half-chord along the segment direction, stable for small chords
    let half = ((r - h) * (r + h)).sqrt() / a.sqrt();
    for t in [t_foot - half, t_foot + half] {
        if (-1e-12..=1.0 + 1e-12).contains(&t) {
            let p = f + d * t;
            out.push(p.y.atan2(p.x).rem_euclid(TAU));
        }
    }
    Ok(())
}

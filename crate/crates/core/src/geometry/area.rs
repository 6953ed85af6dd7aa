//! Two-dimensional weighted area of `Ω⁺` near a point, by slicing.
//!
//! Jordan domains are sliced into horizontal rows, graph domains into vertical
//! columns. Each slice meets `Ω⁺` in finitely many intervals found from the exact
//! polyline crossings, and both directions use composite Gauss–Legendre rules with
//! panel breaks at vertex coordinates and at the kernel's transition radii.

use crate::quad::gl_nodes;

use super::domain::{DomainKind, PlanarDomain, RegionLabel};
use super::point::Point;

/// Where the weight changes quickly, relative to the integration centre.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelShape {
    /// `w(u, v)` depends on `√(u² + v²)`; steep near each listed radius.
    Radial { radii: Vec<f64> },
    /// `w(u, v)` is a product; steep near each listed offset in either coordinate.
    Product { offsets: Vec<f64> },
}

/// Gauss–Legendre order used on every panel.
const ORDER: usize = 16;

/// Panels narrower than this fraction of the window are merged away.
const MIN_PANEL: f64 = 1e-13;

/// `∫_{Ω⁺ ∩ [c − h, c + h]²} w(y − c) dy` for a weight `w(u, v)` supported in the window.
pub fn plus_integral<W: Fn(f64, f64) -> f64>(
    domain: &PlanarDomain,
    center: Point,
    half_width: f64,
    shape: &KernelShape,
    max_panel: f64,
    weight: W,
) -> f64 {
    let columns = domain.kind() == DomainKind::GraphRegion;
    // outer coordinate is v for rows and u for columns
    let mut outer = vec![-half_width, half_width];
    match shape {
        KernelShape::Radial { radii } => {
            for &rho in radii {
                outer.extend([-rho, rho]);
            }
        }
        KernelShape::Product { offsets } => {
            for &o in offsets {
                outer.extend([-o, o]);
            }
        }
    }
    for p in domain.vertices() {
        let d = if columns { p.x - center.x } else { p.y - center.y };
        if d.abs() < half_width {
            outer.push(d);
        }
    }
    if let KernelShape::Radial { radii } = shape {
        band_crossings(domain, center, half_width, radii, columns, &mut outer);
    }
    let outer = split_long(refine_breaks(outer, half_width, shape, half_width), max_panel);

    let mut intervals = Vec::new();
    let mut total = 0.0;
    for w in outer.windows(2) {
        let mut panel = 0.0;
        for (t, wt) in gl_nodes(ORDER, w[0], w[1]) {
            intervals.clear();
            if columns {
                graph_column(domain, center, t, half_width, &mut intervals);
            } else {
                jordan_row(domain, center, t, half_width, &mut intervals);
            }
            let mut inner_breaks = inner_breaks(shape, t, half_width);
            inner_breaks.retain(|b| b.abs() < half_width);
            let mut line = 0.0;
            for &(a, b) in &intervals {
                let mut cuts = vec![a, b];
                cuts.extend(inner_breaks.iter().copied().filter(|&c| c > a && c < b));
                cuts.sort_by(f64::total_cmp);
                let cuts = split_long(cuts, max_panel);
                for c in cuts.windows(2) {
                    if c[1] - c[0] <= MIN_PANEL * half_width {
                        continue;
                    }
                    for (s, ws) in gl_nodes(ORDER, c[0], c[1]) {
                        line += ws * if columns { weight(t, s) } else { weight(s, t) };
                    }
                }
            }
            panel += wt * line;
        }
        total += panel;
    }
    total
}

/// Steps across the steep band in the outer coordinate of the boundary.
const BAND_STEPS: usize = 8;

/// Outer coordinates where the boundary crosses the steep radial band, with the
/// band stretch of each segment subdivided. A boundary nearly parallel to the
/// slices sweeps the whole band within a short outer range, which the plain
/// panels would step over.
fn band_crossings(domain: &PlanarDomain, center: Point, half_width: f64, radii: &[f64], columns: bool, out: &mut Vec<f64>) {
    if radii.len() < 2 {
        return;
    }
    let (lo, hi) = (radii[0], radii[radii.len() - 1]);
    let window = Point::new(half_width, half_width);
    domain.for_each_segment_in_box(center - window, center + window, |s| {
        let d = s.b - s.a;
        let f = s.a - center;
        let a = d.norm2();
        if a == 0.0 {
            return;
        }
        let mut ts = vec![0.0, 1.0];
        for &rho in radii {
            let b = f.dot(d);
            let disc = b * b - a * (f.norm2() - rho * rho);
            if disc >= 0.0 {
                let sq = disc.sqrt();
                ts.extend([(-b - sq) / a, (-b + sq) / a].into_iter().filter(|t| (0.0..=1.0).contains(t)));
            }
        }
        ts.sort_by(f64::total_cmp);
        let coord = |t: f64| {
            let p = s.a + d * t - center;
            if columns {
                p.x
            } else {
                p.y
            }
        };
        for w in ts.windows(2) {
            let mid = (s.a + d * (0.5 * (w[0] + w[1]))).dist(center);
            if mid > lo && mid < hi {
                for k in 0..=BAND_STEPS {
                    out.push(coord(w[0] + (w[1] - w[0]) * k as f64 / BAND_STEPS as f64));
                }
            }
        }
    });
}

/// Sorted, deduplicated breaks with the steep bands split into sub-panels.
fn refine_breaks(mut b: Vec<f64>, half_width: f64, shape: &KernelShape, scale: f64) -> Vec<f64> {
    b.retain(|x| x.abs() <= half_width);
    b.sort_by(f64::total_cmp);
    b.dedup_by(|x, y| (*x - *y).abs() <= MIN_PANEL * scale);
    let steep: Vec<f64> = match shape {
        KernelShape::Radial { radii } => radii.clone(),
        KernelShape::Product { offsets } => offsets.clone(),
    };
    if steep.len() < 2 {
        return b;
    }
    let (lo, hi) = (steep[0], steep[steep.len() - 1]);
    let mut out = Vec::with_capacity(b.len() * 2);
    for w in b.windows(2) {
        out.push(w[0]);
        let mid = 0.5 * (w[0] + w[1]).abs();
        if mid > lo && mid < hi {
            for k in 1..4 {
                out.push(w[0] + (w[1] - w[0]) * k as f64 / 4.0);
            }
        }
    }
    out.push(*b.last().unwrap());
    out
}

fn split_long(b: Vec<f64>, max_panel: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(b.len());
    for w in b.windows(2) {
        let pieces = ((w[1] - w[0]) / max_panel).ceil().max(1.0) as usize;
        for k in 0..pieces {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / pieces as f64);
        }
    }
    if let Some(&last) = b.last() {
        out.push(last);
    }
    out
}

fn inner_breaks(shape: &KernelShape, t: f64, half_width: f64) -> Vec<f64> {
    let mut out = Vec::new();
    match shape {
        KernelShape::Radial { radii } => {
            for &rho in radii {
                if rho > t.abs() {
                    let h = (rho * rho - t * t).sqrt();
                    out.extend([-h, h]);
                }
            }
        }
        KernelShape::Product { offsets } => {
            for &o in offsets {
                out.extend([-o, o]);
            }
        }
    }
    if out.len() >= 4 {
        // split the steep bands the same way as the outer direction
        let mut extra = Vec::new();
        out.sort_by(f64::total_cmp);
        let n = out.len();
        let neg = (out[0], out[n / 2 - 1]);
        let pos = (out[n / 2], out[n - 1]);
        for (a, b) in [neg, pos] {
            for k in 1..4 {
                extra.push(a + (b - a) * k as f64 / 4.0);
            }
        }
        out.extend(extra);
    }
    out.retain(|x| x.abs() < half_width);
    out
}

/// `Ω⁺` intervals (offsets from `center.x`) of the row `y = center.y + v`.
fn jordan_row(domain: &PlanarDomain, center: Point, v: f64, half_width: f64, out: &mut Vec<(f64, f64)>) {
    let y = center.y + v;
    let mut xs = vec![-half_width, half_width];
    let lo = Point::new(center.x - half_width, y);
    let hi = Point::new(center.x + half_width, y);
    domain.for_each_segment_in_box(lo, hi, |s| {
        if (s.a.y <= y) != (s.b.y <= y) {
            let t = (y - s.a.y) / (s.b.y - s.a.y);
            let x = s.a.x + t * (s.b.x - s.a.x) - center.x;
            if x.abs() < half_width {
                xs.push(x);
            }
        }
    });
    xs.sort_by(f64::total_cmp);
    for w in xs.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let mid = Point::new(center.x + 0.5 * (w[0] + w[1]), y);
        if domain.classify(mid) == RegionLabel::InPlus {
            push_merged(out, w[0], w[1]);
        }
    }
}

/// `Ω⁺` interval (offsets from `center.y`) of the column `x = center.x + u`.
fn graph_column(domain: &PlanarDomain, center: Point, u: f64, half_width: f64, out: &mut Vec<(f64, f64)>) {
    let f = domain.graph_value(center.x + u) - center.y;
    let a = f.max(-half_width);
    if a < half_width {
        out.push((a, half_width));
    }
}

fn push_merged(out: &mut Vec<(f64, f64)>, a: f64, b: f64) {
    if let Some(last) = out.last_mut() {
        if last.1 == a {
            last.1 = b;
            return;
        }
    }
    out.push((a, b));
}

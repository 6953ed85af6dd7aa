//! Static SVG renderings with a fixed viewBox: the data bounding box padded 5%.

use std::fmt::Write;

use carleson_core::Point;

/// Fraction of the bounding box added on every side.
pub const PAD: f64 = 0.05;

/// Canvas in data coordinates; `y` is flipped so that up is up.
pub struct Canvas {
    lo: Point,
    hi: Point,
    body: String,
    comment: String,
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

impl Canvas {
    /// Canvas covering `points`, padded by [`PAD`] of the larger side.
    pub fn fit<'a>(points: impl IntoIterator<Item = &'a Point>, comment: &str) -> Self {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if !lo.is_finite() || !hi.is_finite() {
            lo = Point::new(-1.0, -1.0);
            hi = Point::new(1.0, 1.0);
        }
        let side = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let pad = Point::new(PAD * side, PAD * side);
        Canvas { lo: lo - pad, hi: hi + pad, body: String::new(), comment: comment.replace("--", "- -") }
    }

    fn stroke(&self) -> f64 {
        (self.hi.x - self.lo.x).max(self.hi.y - self.lo.y) / 400.0
    }

    fn xy(&self, p: Point) -> (String, String) {
        (fmt(p.x), fmt(-p.y))
    }

    pub fn polyline(&mut self, pts: &[Point], closed: bool, color: &str) {
        let tag = if closed { "polygon" } else { "polyline" };
        let coords: Vec<String> = pts
            .iter()
            .map(|&p| {
                let (x, y) = self.xy(p);
                format!("{x},{y}")
            })
            .collect();
        let w = fmt(self.stroke());
        writeln!(self.body, r#"<{tag} points="{}" fill="none" stroke="{color}" stroke-width="{w}"/>"#, coords.join(" "))
            .unwrap();
    }

    pub fn dot(&mut self, p: Point, scale: f64, color: &str) {
        let (x, y) = self.xy(p);
        let r = fmt(scale * self.stroke());
        writeln!(self.body, r#"<circle cx="{x}" cy="{y}" r="{r}" fill="{color}"/>"#).unwrap();
    }

    pub fn finish(self) -> String {
        let (w, h) = (self.hi.x - self.lo.x, self.hi.y - self.lo.y);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!-- {} -->\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n{}</svg>\n",
            self.comment,
            fmt(self.lo.x),
            fmt(-self.hi.y),
            fmt(w),
            fmt(h),
            self.body
        )
    }
}

/// Blue-to-red ramp for `t ∈ [0, 1]`.
pub fn heat(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 1.0 };
    let r = (255.0 * t).round() as u8;
    let b = (255.0 * (1.0 - t)).round() as u8;
    format!("#{r:02x}40{b:02x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn view_box_is_padded_bbox() {
        let pts = [Point::new(0.0, 0.0), Point::new(2.0, 1.0)];
        let svg = Canvas::fit(&pts, "x").finish();
        assert!(svg.contains(r#"viewBox="-0.100000 -1.100000 2.200000 1.200000""#), "{svg}");
    }

    #[test]
    fn heat_ends() {
        assert_eq!(heat(0.0), "#0040ff");
        assert_eq!(heat(1.0), "#ff4000");
    }
}

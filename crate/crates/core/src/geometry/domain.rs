use serde::{Deserialize, Serialize};

use super::index::SegmentGrid;
use super::point::{Point, Segment};
use crate::error::{Error, Result};

/// Which side of the boundary a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    InPlus,
    InMinus,
    OnGamma,
}

impl RegionLabel {
    pub fn flipped(self) -> Self {
        match self {
            RegionLabel::InPlus => RegionLabel::InMinus,
            RegionLabel::InMinus => RegionLabel::InPlus,
            RegionLabel::OnGamma => RegionLabel::OnGamma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainKind {
    /// Bounded interior of a simple closed polyline.
    JordanPolyline,
    /// Region strictly above a compactly supported piecewise-linear graph.
    GraphRegion,
}

/// A planar open set `Ω⁺` together with its boundary `Γ`.
///
/// Jordan polylines are stored counter-clockwise so that the bounded interior
/// is `Ω⁺`. Graph regions are stored as vertices with strictly increasing
/// abscissae whose first and last ordinates vanish; outside the vertex range the
/// graph continues as the horizontal axis.
#[derive(Debug, Clone)]
pub struct PlanarDomain {
    kind: DomainKind,
    vertices: Vec<Point>,
    segments: Vec<Segment>,
    grid: Option<SegmentGrid>,
    snap: f64,
    diameter: f64,
    max_slope: f64,
    plus_inside: bool,
}

/// Relative snap band for [`RegionLabel::OnGamma`].
pub const SNAP_RELATIVE: f64 = 1e-9;

impl PlanarDomain {
    /// Closed polyline; either orientation is accepted and normalized.
    pub fn jordan(vertices: Vec<Point>) -> Result<Self> {
        Self::jordan_impl(vertices, true)
    }

    /// Closed polyline keeping its orientation: counter-clockwise input makes the
    /// bounded interior `Ω⁺`, clockwise input makes the unbounded exterior `Ω⁺`.
    pub fn jordan_oriented(vertices: Vec<Point>) -> Result<Self> {
        Self::jordan_impl(vertices, false)
    }

    fn jordan_impl(vertices: Vec<Point>, normalize: bool) -> Result<Self> {
        let mut v: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if !p.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite vertex ({}, {})", p.x, p.y)));
            }
            if v.last() != Some(&p) {
                v.push(p);
            }
        }
        while v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        if v.len() < 3 {
            return Err(Error::InvalidInput("a closed polyline needs at least 3 distinct vertices".into()));
        }
        let area = signed_area(&v);
        if area == 0.0 {
            return Err(Error::InvalidInput("polyline encloses zero area".into()));
        }
        let mut plus_inside = true;
        if area < 0.0 {
            v.reverse();
            plus_inside = normalize;
        }
        let n = v.len();
        let segments: Vec<Segment> = (0..n).map(|i| Segment::new(v[i], v[(i + 1) % n])).collect();
        let (lo, hi) = bbox(&v);
        let diameter = (hi - lo).norm();
        let snap = SNAP_RELATIVE * diameter;
        let grid = SegmentGrid::build(&segments, snap);
        let dom = PlanarDomain {
            kind: DomainKind::JordanPolyline,
            vertices: v,
            segments,
            grid: Some(grid),
            snap,
            diameter,
            max_slope: f64::INFINITY,
            plus_inside,
        };
        dom.check_simple()?;
        Ok(dom)
    }

    /// Graph of the piecewise-linear interpolant through `vertices`
    /// (strictly increasing abscissae, zero at both ends).
    pub fn graph(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidInput("a graph needs at least 2 vertices".into()));
        }
        for p in &vertices {
            if !p.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite vertex ({}, {})", p.x, p.y)));
            }
        }
        for w in vertices.windows(2) {
            if w[1].x <= w[0].x {
                return Err(Error::InvalidInput(format!(
                    "graph abscissae must increase strictly (got {} then {})",
                    w[0].x, w[1].x
                )));
            }
        }
        let (lo, hi) = bbox(&vertices);
        let diameter = (hi - lo).norm().max(f64::MIN_POSITIVE);
        let first = vertices[0].y;
        let last = vertices[vertices.len() - 1].y;
        let tol = 1e-12 * diameter;
        if first.abs() > tol || last.abs() > tol {
            return Err(Error::InvalidInput(format!(
                "graph must vanish at both ends of its support (f = {first} and {last})"
            )));
        }
        let mut vertices = vertices;
        vertices[0].y = 0.0;
        let n = vertices.len();
        vertices[n - 1].y = 0.0;
        let segments: Vec<Segment> = vertices.windows(2).map(|w| Segment::new(w[0], w[1])).collect();
        let max_slope = segments
            .iter()
            .map(|s| ((s.b.y - s.a.y) / (s.b.x - s.a.x)).abs())
            .fold(0.0, f64::max);
        Ok(PlanarDomain {
            kind: DomainKind::GraphRegion,
            vertices,
            segments,
            grid: None,
            snap: SNAP_RELATIVE * diameter,
            diameter,
            max_slope,
            plus_inside: true,
        })
    }

    /// Uniformly sampled graph `f(x0 + k dx)`.
    pub fn graph_samples(x0: f64, dx: f64, f: &[f64]) -> Result<Self> {
        if !(dx > 0.0) || !x0.is_finite() {
            return Err(Error::InvalidInput(format!("bad grid x0={x0}, dx={dx}")));
        }
        PlanarDomain::graph(f.iter().enumerate().map(|(k, &y)| Point::new(x0 + k as f64 * dx, y)).collect())
    }

    /// The horizontal axis: `Ω⁺` is the upper half-plane.
    pub fn line() -> Self {
        PlanarDomain::graph(vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)]).expect("valid line")
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn snap_tolerance(&self) -> f64 {
        self.snap
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Largest slope of a graph domain (infinite for polylines).
    pub fn max_slope(&self) -> f64 {
        self.max_slope
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox(&self.vertices)
    }

    /// Whether `Ω⁺` is the bounded side (always true for graphs and normalized polylines).
    pub fn plus_is_bounded(&self) -> bool {
        self.plus_inside && self.kind == DomainKind::JordanPolyline
    }

    /// Signed enclosed area (positive after normalization); zero for graphs.
    pub fn signed_area(&self) -> f64 {
        match self.kind {
            DomainKind::JordanPolyline => signed_area(&self.vertices),
            DomainKind::GraphRegion => 0.0,
        }
    }

    /// Total length of `Γ` (for graphs, of the non-trivial part over the vertex range).
    pub fn perimeter(&self) -> f64 {
        self.segments.iter().map(|s| s.a.dist(s.b)).sum()
    }

    /// Graph value `f(x)` (zero outside the vertex range).
    pub fn graph_value(&self, x: f64) -> f64 {
        debug_assert_eq!(self.kind, DomainKind::GraphRegion);
        let v = &self.vertices;
        if x <= v[0].x || x >= v[v.len() - 1].x {
            return 0.0;
        }
        let k = v.partition_point(|p| p.x <= x).saturating_sub(1);
        let (a, b) = (v[k], v[k + 1]);
        a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x)
    }

    /// Point label with the snap band of width [`snap_tolerance`](Self::snap_tolerance).
    pub fn classify(&self, p: Point) -> RegionLabel {
        match self.kind {
            DomainKind::JordanPolyline => {
                let grid = self.grid.as_ref().expect("polyline grid");
                if self.dist_within(p, self.snap) <= self.snap {
                    return RegionLabel::OnGamma;
                }
                if grid.ray_parity(p, &self.segments) == self.plus_inside {
                    RegionLabel::InPlus
                } else {
                    RegionLabel::InMinus
                }
            }
            DomainKind::GraphRegion => {
                let gap = p.y - self.graph_value(p.x);
                let band = self.snap * (1.0 + self.max_slope * self.max_slope).sqrt();
                if gap.abs() <= band && self.dist_within(p, self.snap) <= self.snap {
                    RegionLabel::OnGamma
                } else if gap > 0.0 {
                    RegionLabel::InPlus
                } else {
                    RegionLabel::InMinus
                }
            }
        }
    }

    /// Distance from `p` to `Γ`, or any value `> bound` when that distance exceeds `bound`.
    pub fn dist_within(&self, p: Point, bound: f64) -> f64 {
        let mut best = f64::INFINITY;
        self.for_each_segment_in_box(p - Point::new(bound, bound), p + Point::new(bound, bound), |s| {
            best = best.min(s.dist_to(p));
        });
        best
    }

    /// Visits every boundary segment whose bounding box may meet `[lo, hi]`,
    /// including the clipped horizontal rays of a graph domain.
    pub fn for_each_segment_in_box<F: FnMut(Segment)>(&self, lo: Point, hi: Point, mut f: F) {
        match self.kind {
            DomainKind::JordanPolyline => {
                let mut ids = Vec::new();
                self.grid.as_ref().unwrap().query_box(lo, hi, &mut ids);
                for id in ids {
                    f(self.segments[id as usize]);
                }
            }
            DomainKind::GraphRegion => self.graph_segments_in_range(lo.x, hi.x, f),
        }
    }

    /// Boundary pieces that can meet the circle `∂B(c, r)`.
    pub(crate) fn segments_near_circle(&self, c: Point, r: f64, ids: &mut Vec<u32>, out: &mut Vec<Segment>) {
        out.clear();
        match self.kind {
            DomainKind::JordanPolyline => {
                self.grid.as_ref().unwrap().query_circle(c, r, ids);
                out.extend(ids.iter().map(|&i| self.segments[i as usize]));
            }
            DomainKind::GraphRegion => self.graph_segments_in_range(c.x - r, c.x + r, |s| out.push(s)),
        }
    }

    fn graph_segments_in_range<F: FnMut(Segment)>(&self, x_lo: f64, x_hi: f64, mut f: F) {
        let v = &self.vertices;
        let first = v[0].x;
        let last = v[v.len() - 1].x;
        let span = (x_hi - x_lo).abs() + 1.0;
        if x_lo < first {
            f(Segment::new(Point::new(x_lo.min(first) - span, 0.0), Point::new(first, 0.0)));
        }
        if x_hi > last {
            f(Segment::new(Point::new(last, 0.0), Point::new(x_hi.max(last) + span, 0.0)));
        }
        if x_hi < first || x_lo > last {
            return;
        }
        let k0 = v.partition_point(|p| p.x <= x_lo).saturating_sub(1);
        let k1 = v.partition_point(|p| p.x < x_hi).min(v.len() - 1);
        for k in k0..k1 {
            f(self.segments[k]);
        }
    }

    fn check_simple(&self) -> Result<()> {
        let n = self.segments.len();
        let grid = self.grid.as_ref().unwrap();
        for bucket in grid.buckets() {
            for (a, &i) in bucket.iter().enumerate() {
                for &j in &bucket[a + 1..] {
                    let (i, j) = (i as usize, j as usize);
                    let adjacent = (i + 1) % n == j || (j + 1) % n == i;
                    let si = self.segments[i];
                    let sj = self.segments[j];
                    let hit = if adjacent {
                        overlapping_adjacent(si, sj, i, j, n)
                    } else {
                        segments_intersect(si, sj)
                    };
                    if hit {
                        return Err(Error::InvalidInput(format!(
                            "polyline is not simple: edges {i} and {j} intersect"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

}

fn bbox(v: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in v {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

pub(crate) fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>()
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(s: Segment, p: Point) -> bool {
    p.x >= s.a.x.min(s.b.x) && p.x <= s.a.x.max(s.b.x) && p.y >= s.a.y.min(s.b.y) && p.y <= s.a.y.max(s.b.y)
}

fn segments_intersect(s: Segment, t: Segment) -> bool {
    let d1 = orient(t.a, t.b, s.a);
    let d2 = orient(t.a, t.b, s.b);
    let d3 = orient(s.a, s.b, t.a);
    let d4 = orient(s.a, s.b, t.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(t, s.a))
        || (d2 == 0.0 && on_segment(t, s.b))
        || (d3 == 0.0 && on_segment(s, t.a))
        || (d4 == 0.0 && on_segment(s, t.b))
}

/// Adjacent edges only share their common vertex unless they fold back onto each other.
fn overlapping_adjacent(si: Segment, sj: Segment, i: usize, j: usize, n: usize) -> bool {
    let (first, second) = if (i + 1) % n == j { (si, sj) } else { (sj, si) };
    if n == 3 {
        return false;
    }
    let d1 = first.b - first.a;
    let d2 = second.b - second.a;
    d1.cross(d2) == 0.0 && d1.dot(d2) < 0.0
}

/// On-disk curve description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub header: Option<serde_json::Value>,
}

impl CurveFile {
    pub fn into_domain(self) -> Result<PlanarDomain> {
        let pts = |v: Vec<[f64; 2]>| -> Vec<Point> { v.into_iter().map(|[x, y]| Point::new(x, y)).collect() };
        match (self.kind.as_str(), self.vertices, self.f) {
            ("jordan", Some(v), _) => PlanarDomain::jordan(pts(v)),
            ("jordan", None, _) => Err(Error::Parse("field `vertices` is required for kind \"jordan\"".into())),
            ("graph", Some(v), _) => PlanarDomain::graph(pts(v)),
            ("graph", None, Some(f)) => {
                let x0 = self.x0.ok_or_else(|| Error::Parse("field `x0` is required with `f`".into()))?;
                let dx = self.dx.ok_or_else(|| Error::Parse("field `dx` is required with `f`".into()))?;
                PlanarDomain::graph_samples(x0, dx, &f)
            }
            ("graph", None, None) => Err(Error::Parse("kind \"graph\" needs `vertices` or `x0`/`dx`/`f`".into())),
            (k, _, _) => Err(Error::Parse(format!("field `kind`: unknown value {k:?} (expected \"jordan\" or \"graph\")"))),
        }
    }

    pub fn from_domain(domain: &PlanarDomain, header: Option<serde_json::Value>) -> Self {
        CurveFile {
            kind: match domain.kind() {
                DomainKind::JordanPolyline => "jordan".into(),
                DomainKind::GraphRegion => "graph".into(),
            },
            vertices: Some(domain.vertices().iter().map(|p| [p.x, p.y]).collect()),
            x0: None,
            dx: None,
            f: None,
            header,
        }
    }
}

/// Parses a curve JSON document, reporting line/column on syntax errors.
pub fn parse_curve_json(text: &str) -> Result<PlanarDomain> {
    let file: CurveFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
    file.into_domain()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> PlanarDomain {
        PlanarDomain::jordan(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn classify_square() {
        let sq = unit_square();
        assert_eq!(sq.classify(Point::new(0.5, 0.5)), RegionLabel::InPlus);
        assert_eq!(sq.classify(Point::new(2.0, 0.0)), RegionLabel::InMinus);
        assert_eq!(sq.classify(Point::new(1.0, 0.3)), RegionLabel::OnGamma);
        assert_eq!(sq.classify(Point::new(-0.5, 0.5)), RegionLabel::InMinus);
    }

    #[test]
    fn classify_line() {
        let line = PlanarDomain::line();
        assert_eq!(line.classify(Point::new(0.3, 0.0)), RegionLabel::OnGamma);
        assert_eq!(line.classify(Point::new(5.0, 1e-3)), RegionLabel::InPlus);
        assert_eq!(line.classify(Point::new(-7.0, -1e-3)), RegionLabel::InMinus);
    }

    #[test]
    fn clockwise_input_is_normalized() {
        let sq = PlanarDomain::jordan(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(sq.signed_area() > 0.0);
        assert_eq!(sq.classify(Point::new(0.5, 0.5)), RegionLabel::InPlus);
    }

    #[test]
    fn reversing_orientation_swaps_labels() {
        let ccw = vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(1.0, 1.5)];
        let mut cw = ccw.clone();
        cw.reverse();
        let a = PlanarDomain::jordan_oriented(ccw).unwrap();
        let b = PlanarDomain::jordan_oriented(cw).unwrap();
        for p in [Point::new(1.0, 0.5), Point::new(3.0, 3.0), Point::new(-1.0, 0.2), Point::new(1.0, 1.4)] {
            assert_eq!(a.classify(p), b.classify(p).flipped());
        }
    }

    #[test]
    fn rejects_self_intersection() {
        let bow = PlanarDomain::jordan(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ]);
        assert!(matches!(bow, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn rejects_graph_not_vanishing() {
        assert!(PlanarDomain::graph(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.5)]).is_err());
        assert!(PlanarDomain::graph(vec![Point::new(1.0, 0.0), Point::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn curve_json_formats() {
        let d = parse_curve_json(r#"{"kind":"jordan","vertices":[[0,0],[1,0],[0,1]]}"#).unwrap();
        assert_eq!(d.kind(), DomainKind::JordanPolyline);
        let g = parse_curve_json(r#"{"kind":"graph","x0":-1,"dx":0.5,"f":[0,0.1,0.2,0.1,0]}"#).unwrap();
        assert!((g.graph_value(0.0) - 0.2).abs() < 1e-15);
        let err = parse_curve_json(r#"{"kind":"blob"}"#).unwrap_err();
        assert!(err.to_string().contains("kind"));
        let err = parse_curve_json("{\n \"kind\": }").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }
}

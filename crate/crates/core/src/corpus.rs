//! Deterministic test curves, graphs and measures.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::construction::WeightedPointSet;
use crate::error::{Error, Result};
use crate::geometry::{DomainKind, PlanarDomain, Point};
use crate::spectral::GraphFunction1D;

/// SplitMix64: seed 0 yields `0xE220A8397B1DCDAF` first.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, a: f64, b: f64) -> f64 {
        a + (b - a) * self.next_f64()
    }
}

/// Regular `n`-gon inscribed in the unit circle, vertex 0 at `(1, 0)`.
pub fn gen_circle(n: usize) -> Result<PlanarDomain> {
    if n < 64 {
        return Err(Error::InvalidInput(format!("circle needs at least 64 vertices, got {n}")));
    }
    PlanarDomain::jordan((0..n).map(|k| Point::polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect())
}

/// Arc samples of the wedge boundary.
pub const WEDGE_ARC: usize = 64;
/// Radius of the circular sector.
pub const WEDGE_RADIUS: f64 = 2.0;

/// Sector of radius 2 with its vertex at the origin, bisector along `+y` and
/// interior angle `omega`.
pub fn gen_wedge(omega: f64) -> Result<PlanarDomain> {
    if !(omega > 0.1 && omega < 2.0 * PI - 0.1) {
        return Err(Error::InvalidInput(format!("wedge angle must lie in (0.1, 2π − 0.1), got {omega}")));
    }
    let start = 0.5 * PI - 0.5 * omega;
    let mut v = vec![Point::new(0.0, 0.0)];
    v.extend((0..=WEDGE_ARC).map(|k| Point::polar(WEDGE_RADIUS, start + omega * k as f64 / WEDGE_ARC as f64)));
    PlanarDomain::jordan(v)
}

/// Koch snowflake of side 1, counter-clockwise, bumps pointing outwards.
pub fn gen_koch(depth: u32) -> Result<PlanarDomain> {
    if depth > 8 {
        return Err(Error::InvalidInput(format!("Koch depth must be at most 8, got {depth}")));
    }
    let h = 3f64.sqrt() / 2.0;
    let mut v = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, h)];
    let (s, c) = (-PI / 3.0).sin_cos();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(4 * v.len());
        for k in 0..v.len() {
            let a = v[k];
            let b = v[(k + 1) % v.len()];
            let d = (b - a) * (1.0 / 3.0);
            let p = a + d;
            let peak = p + Point::new(c * d.x - s * d.y, s * d.x + c * d.y);
            next.extend([a, p, peak, a + d * 2.0]);
        }
        v = next;
    }
    PlanarDomain::jordan(v)
}

pub fn gen_square() -> PlanarDomain {
    PlanarDomain::jordan(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)])
        .expect("unit square")
}

/// Star with `points` tips on the unit circle, valleys at radius `inner`, and
/// radii perturbed by up to `jitter` relative. Angles stay monotone, so the
/// polygon is simple.
pub fn gen_star(points: usize, inner: f64, jitter: f64, seed: u64) -> Result<PlanarDomain> {
    if points < 3 || !(inner > 0.0 && inner < 1.0) || !(0.0..0.5).contains(&jitter) {
        return Err(Error::InvalidInput("star needs ≥ 3 tips, 0 < inner < 1, 0 ≤ jitter < 0.5".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let n = 2 * points;
    PlanarDomain::jordan(
        (0..n)
            .map(|k| {
                let base = if k % 2 == 0 { 1.0 } else { inner };
                Point::polar(base * (1.0 + rng.uniform(-jitter, jitter)), 2.0 * PI * k as f64 / n as f64)
            })
            .collect(),
    )
}

/// Knots of a generated Lipschitz graph over its support.
pub const GRAPH_INTERVALS: usize = 128;

/// Random trigonometric polynomial times a smooth window on `support`,
/// sampled with `dx = L/128` and rescaled so that its largest slope is `slope_cap`.
pub fn gen_lipschitz_graph(seed: u64, degree: usize, slope_cap: f64, support: (f64, f64)) -> Result<GraphFunction1D> {
    let (a, b) = support;
    if !(b > a) || !(0.0..=0.1).contains(&slope_cap) || degree == 0 {
        return Err(Error::InvalidInput("graph needs a < b, 0 ≤ slope_cap ≤ 0.1 and degree ≥ 1".into()));
    }
    let dx = (b - a) / GRAPH_INTERVALS as f64;
    if slope_cap == 0.0 {
        return GraphFunction1D::new(a, dx, vec![0.0; GRAPH_INTERVALS + 1]);
    }
    let mut rng = SplitMix64::new(seed);
    let coeffs: Vec<(f64, f64)> =
        (1..=degree).map(|k| (rng.uniform(-1.0, 1.0) / k as f64, rng.uniform(-1.0, 1.0) / k as f64)).collect();
    let raw: Vec<f64> = (0..=GRAPH_INTERVALS)
        .map(|j| {
            if j == 0 || j == GRAPH_INTERVALS {
                return 0.0;
            }
            let u = -1.0 + 2.0 * j as f64 / GRAPH_INTERVALS as f64;
            let window = (1.0 - 1.0 / (1.0 - u * u)).exp();
            let trig: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(k, &(c, s))| {
                    let t = PI * (k + 1) as f64 * u;
                    c * t.cos() + s * t.sin()
                })
                .sum();
            window * trig
        })
        .collect();
    let slope = raw.windows(2).map(|w| (w[1] - w[0]).abs() / dx).fold(0.0, f64::max);
    if slope == 0.0 {
        return GraphFunction1D::new(a, dx, raw);
    }
    let scale = slope_cap / slope;
    GraphFunction1D::new(a, dx, raw.into_iter().map(|v| v * scale).collect())
}

/// How atoms are placed on a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SampleMode {
    /// Equal weights at the midpoints of `n` equal arclength pieces.
    Arclength,
    /// A fraction `p` of the atoms moved into seeded clusters off the curve.
    GraphWithNoise { p: f64, seed: u64 },
}

/// Clusters used by the noisy sampling mode.
pub const NOISE_CLUSTERS: usize = 3;
/// Cluster radius and height range above the curve, relative to the curve extent.
const CLUSTER_RADIUS: f64 = 0.002;
const CLUSTER_HEIGHT: (f64, f64) = (0.01, 0.03);

fn boundary_polyline(domain: &PlanarDomain) -> Vec<Point> {
    let mut v = domain.vertices().to_vec();
    if domain.kind() == DomainKind::JordanPolyline {
        v.push(v[0]);
    }
    v
}

/// Point at arclength `s` along the polyline with cumulative lengths `cum`.
fn along(poly: &[Point], cum: &[f64], s: f64) -> Point {
    let k = cum.partition_point(|&c| c <= s).clamp(1, poly.len() - 1);
    let seg = cum[k] - cum[k - 1];
    let t = if seg > 0.0 { (s - cum[k - 1]) / seg } else { 0.0 };
    poly[k - 1] + (poly[k] - poly[k - 1]) * t
}

/// `n` points at arclength midpoints of equal pieces of the boundary polyline.
pub fn boundary_samples(domain: &PlanarDomain, n: usize) -> Vec<Point> {
    let fractions: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect();
    boundary_points(domain, &fractions)
}

/// Points at the given fractions of the total arclength of the boundary polyline.
pub fn boundary_points(domain: &PlanarDomain, fractions: &[f64]) -> Vec<Point> {
    let poly = boundary_polyline(domain);
    let mut cum = vec![0.0];
    for w in poly.windows(2) {
        cum.push(cum.last().unwrap() + w[0].dist(w[1]));
    }
    let total = *cum.last().unwrap();
    fractions.iter().map(|&t| along(&poly, &cum, total * t.clamp(0.0, 1.0))).collect()
}

/// Atoms on the boundary of `domain` (its support polyline for graphs),
/// with equal weights summing to its length.
pub fn sample_measure(domain: &PlanarDomain, n: usize, mode: SampleMode) -> Result<WeightedPointSet> {
    if n < 100 {
        return Err(Error::InvalidInput(format!("need at least 100 atoms, got {n}")));
    }
    let poly = boundary_polyline(domain);
    let mut cum = vec![0.0];
    for w in poly.windows(2) {
        cum.push(cum.last().unwrap() + w[0].dist(w[1]));
    }
    let total = *cum.last().unwrap();
    let weight = total / n as f64;
    let (noisy, rng) = match mode {
        SampleMode::Arclength => (0, None),
        SampleMode::GraphWithNoise { p, seed } => {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::InvalidInput(format!("noise fraction must lie in [0, 1), got {p}")));
            }
            ((p * n as f64).round() as usize, Some(SplitMix64::new(seed)))
        }
    };
    let on_curve = n - noisy;
    let mut points: Vec<Point> =
        (0..on_curve).map(|k| along(&poly, &cum, total * (k as f64 + 0.5) / on_curve as f64)).collect();
    if let Some(mut rng) = rng {
        let extent = domain.diameter();
        let centers: Vec<Point> = (0..NOISE_CLUSTERS)
            .map(|_| {
                let base = along(&poly, &cum, total * rng.uniform(0.2, 0.8));
                let lift = extent * rng.uniform(CLUSTER_HEIGHT.0, CLUSTER_HEIGHT.1);
                base + Point::new(0.0, if rng.next_f64() < 0.5 { lift } else { -lift })
            })
            .collect();
        for k in 0..noisy {
            let c = centers[k % NOISE_CLUSTERS];
            let rad = extent * CLUSTER_RADIUS * rng.next_f64().sqrt();
            points.push(c + Point::polar(rad, 2.0 * PI * rng.next_f64()));
        }
    }
    WeightedPointSet::new(points, vec![weight; n])
}

/// A named, reproducible corpus entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub name: String,
    pub generator: Generator,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    Circle { n: usize },
    Wedge { omega: f64 },
    Koch { depth: u32 },
    Square,
    Star { points: usize, inner: f64, jitter: f64 },
    Line,
    LipschitzGraph { degree: usize, slope_cap: f64, support: (f64, f64) },
}

/// A generated curve; graphs also carry their 1-D function.
#[derive(Debug, Clone)]
pub struct CorpusCurve {
    pub spec: CorpusSpec,
    pub domain: PlanarDomain,
    pub function: Option<GraphFunction1D>,
}

impl CorpusSpec {
    pub fn new(name: impl Into<String>, generator: Generator, seed: u64) -> Self {
        CorpusSpec { name: name.into(), generator, seed }
    }

    pub fn build(&self) -> Result<CorpusCurve> {
        let mut function = None;
        let domain = match self.generator {
            Generator::Circle { n } => gen_circle(n)?,
            Generator::Wedge { omega } => gen_wedge(omega)?,
            Generator::Koch { depth } => gen_koch(depth)?,
            Generator::Square => gen_square(),
            Generator::Star { points, inner, jitter } => gen_star(points, inner, jitter, self.seed)?,
            Generator::Line => PlanarDomain::line(),
            Generator::LipschitzGraph { degree, slope_cap, support } => {
                let f = gen_lipschitz_graph(self.seed, degree, slope_cap, support)?;
                let d = f.domain()?;
                function = Some(f);
                d
            }
        };
        Ok(CorpusCurve { spec: self.clone(), domain, function })
    }
}

/// Slope cap of the default graph corpus.
pub const DEFAULT_SLOPE_CAP: f64 = 0.05;
/// Trigonometric degree of the default graph corpus.
pub const DEFAULT_DEGREE: usize = 6;

pub fn graph_spec(k: u64, seed: u64, slope_cap: f64) -> CorpusSpec {
    let s = seed.wrapping_mul(0x1000).wrapping_add(k);
    CorpusSpec::new(
        format!("graph-{k}"),
        Generator::LipschitzGraph { degree: DEFAULT_DEGREE, slope_cap, support: (-1.0, 1.0) },
        s,
    )
}

/// Fifty curves: wedges, circles, Koch curves, the square, stars and graphs.
pub fn mixed_corpus(seed: u64) -> Vec<CorpusSpec> {
    let mut out = Vec::with_capacity(50);
    for k in 0..10 {
        let omega = 0.4 + 0.55 * k as f64;
        out.push(CorpusSpec::new(format!("wedge-{k}"), Generator::Wedge { omega }, 0));
    }
    for k in 0..5 {
        out.push(CorpusSpec::new(format!("circle-{k}"), Generator::Circle { n: 64 << k }, 0));
    }
    for depth in 2..6 {
        out.push(CorpusSpec::new(format!("koch-{depth}"), Generator::Koch { depth }, 0));
    }
    out.push(CorpusSpec::new("square", Generator::Square, 0));
    for k in 0..10 {
        let points = 5 + k as usize;
        let inner = 0.45 + 0.03 * k as f64;
        out.push(CorpusSpec::new(
            format!("star-{k}"),
            Generator::Star { points, inner, jitter: 0.05 },
            seed.wrapping_add(k),
        ));
    }
    for k in 0..20 {
        out.push(graph_spec(k, seed, DEFAULT_SLOPE_CAP));
    }
    out
}

/// `ε` at the vertex of a wedge for `r < 2`.
pub fn wedge_vertex_epsilon(omega: f64) -> f64 {
    (PI - omega).abs()
}

/// `ε` on the unit circle: `2 arcsin(r/2)`.
pub fn circle_epsilon(r: f64) -> f64 {
    2.0 * (0.5 * r).asin()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_vector() {
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn koch_counts() {
        let d = gen_koch(3).unwrap();
        assert_eq!(d.segments().len(), 192);
        assert!((d.perimeter() - 3.0 * (4.0f64 / 3.0).powi(3)).abs() < 1e-12);
        assert!(d.signed_area() > 0.0);
        assert!(gen_koch(0).unwrap().segments().len() == 3);
    }

    #[test]
    fn circle_area() {
        let d = gen_circle(4096).unwrap();
        assert_eq!(d.vertices()[0], Point::new(1.0, 0.0));
        assert!((d.signed_area() - PI).abs() < 1e-5);
    }

    #[test]
    fn graph_slope_is_capped() {
        let f = gen_lipschitz_graph(7, 6, 0.05, (-1.0, 1.0)).unwrap();
        assert!((f.max_slope() - 0.05).abs() < 1e-9);
        let z = gen_lipschitz_graph(7, 6, 0.0, (-1.0, 1.0)).unwrap();
        assert_eq!(z.max_slope(), 0.0);
    }

    #[test]
    fn measures() {
        let seg = PlanarDomain::graph(vec![Point::new(-0.5, 0.0), Point::new(0.5, 0.0)]).unwrap();
        let mu = sample_measure(&seg, 1000, SampleMode::Arclength).unwrap();
        assert!((mu.mass_in_ball(Point::new(0.0, 0.0), 1.0) - 1.0).abs() < 1e-12);
        let c = gen_circle(256).unwrap();
        let mu = sample_measure(&c, 500, SampleMode::Arclength).unwrap();
        assert!((mu.total_mass() - c.perimeter()).abs() < 1e-9);
        let f = gen_lipschitz_graph(3, 6, 0.05, (-1.0, 1.0)).unwrap();
        let g = f.domain().unwrap();
        let mu = sample_measure(&g, 1000, SampleMode::GraphWithNoise { p: 0.1, seed: 9 }).unwrap();
        let off: f64 = mu
            .points()
            .iter()
            .zip(mu.weights())
            .filter(|(p, _)| (p.y - f.eval(p.x)).abs() > 1e-9)
            .map(|(_, w)| w)
            .sum();
        assert!((off / mu.total_mass() - 0.1).abs() <= 1e-3 + 1e-12);
    }

    #[test]
    fn corpus_is_reproducible() {
        let a = mixed_corpus(1);
        assert_eq!(a.len(), 50);
        assert_eq!(a, mixed_corpus(1));
        let json = serde_json::to_string(&a[45]).unwrap();
        let back: CorpusSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a[45]);
        let f1 = back.build().unwrap().function.unwrap();
        let f2 = a[45].build().unwrap().function.unwrap();
        assert_eq!(f1.values, f2.values);
    }
}

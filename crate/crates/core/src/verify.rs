//! Verification suites: each compares a computed quantity with an independent
//! evaluation or a stated bound and emits one record per comparison.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::construction::{
    whitney_cover, ConeEnvelope, Construction, ConstructionParams, SampledLineFunction, WeightedPointSet,
};
use crate::corpus::{
    circle_epsilon, gen_circle, gen_lipschitz_graph, gen_wedge, graph_spec, mixed_corpus, sample_measure,
    wedge_vertex_epsilon, CorpusCurve, Generator, SampleMode, SplitMix64, DEFAULT_DEGREE, DEFAULT_SLOPE_CAP,
};
use crate::error::{Error, Result};
use crate::geometry::{PlanarDomain, Point, RegionLabel};
use crate::kernel::Kernel;
use crate::multiscale::{a_rho_area_signed, lem1_check};
use crate::quad::RadialGrid;
use crate::spectral::{
    deviation_energy_direct, graph_a_rho, identity_grid, kernel_constants, lemdiff1, lips_ratio, plancherel_energy,
    GraphFunction1D,
};

/// One comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRecord {
    pub lemma_id: String,
    pub corpus_item: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerifyRecord {
    pub fn new(lemma_id: &str, item: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64, pass: bool) -> Self {
        let ratio = if rhs != 0.0 { lhs / rhs } else if lhs == 0.0 { 1.0 } else { f64::INFINITY };
        VerifyRecord { lemma_id: lemma_id.into(), corpus_item: item.into(), lhs, rhs, ratio, tolerance, pass }
    }

    /// `|lhs − rhs| ≤ tol · |rhs|`.
    pub fn relative(lemma_id: &str, item: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(lemma_id, item, lhs, rhs, tol, (lhs - rhs).abs() <= tol * rhs.abs())
    }

    /// `|lhs − rhs| ≤ tol`.
    pub fn absolute(lemma_id: &str, item: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(lemma_id, item, lhs, rhs, tol, (lhs - rhs).abs() <= tol)
    }

    /// `lhs ≤ rhs + tol`.
    pub fn at_most(lemma_id: &str, item: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(lemma_id, item, lhs, rhs, tol, lhs <= rhs + tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub records: Vec<VerifyRecord>,
}

impl SuiteReport {
    fn new(suite: Suite, seed: u64, records: Vec<VerifyRecord>) -> Self {
        SuiteReport { suite: suite.name().into(), seed, pass: records.iter().all(|r| r.pass), records }
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lem1,
    Fourier,
    Lem54,
    LemDiff1,
    Lips,
    Whitney,
    Diagnostics,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Lem1, Suite::Fourier, Suite::Lem54, Suite::LemDiff1, Suite::Lips, Suite::Whitney, Suite::Diagnostics];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lem1 => "lem1",
            Suite::Fourier => "fourier",
            Suite::Lem54 => "lem54",
            Suite::LemDiff1 => "lemdiff1",
            Suite::Lips => "lips",
            Suite::Whitney => "whitney",
            Suite::Diagnostics => "diagnostics",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn run(self, seed: u64) -> Result<SuiteReport> {
        let records = match self {
            Suite::Lem1 => lem1_suite(seed)?,
            Suite::Fourier => fourier_suite(seed)?,
            Suite::Lem54 => lem54_suite(seed)?,
            Suite::LemDiff1 => lemdiff1_suite(seed)?,
            Suite::Lips => lips_suite(seed)?,
            Suite::Whitney => whitney_suite(seed)?,
            Suite::Diagnostics => diagnostics_suite(seed)?,
        };
        Ok(SuiteReport::new(self, seed, records))
    }
}

// ---------------------------------------------------------------- oracles

/// Angular samples of the brute-force arc scan.
pub const ORACLE_SAMPLES: usize = 1_000_000;

/// `ε(x, r)` from the longest runs of `Ω⁺` and `Ω⁻` labels among equally spaced
/// angles on the circle.
pub fn brute_force_epsilon(domain: &PlanarDomain, x: Point, r: f64, samples: usize) -> f64 {
    let labels: Vec<bool> = (0..samples)
        .map(|k| domain.classify(x + Point::polar(r, 2.0 * PI * (k as f64 + 0.5) / samples as f64)) == RegionLabel::InPlus)
        .collect();
    let longest = |want: bool| {
        if labels.iter().all(|&l| l == want) {
            return samples;
        }
        // start just after a sample of the other label so runs do not wrap
        let start = labels.iter().position(|&l| l != want).unwrap();
        let (mut best, mut run) = (0, 0);
        for k in 1..=samples {
            if labels[(start + k) % samples] == want {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        best
    };
    let arc = |n: usize| 2.0 * PI * r * n as f64 / samples as f64;
    (PI * r - arc(longest(true))).abs().max((PI * r - arc(longest(false))).abs()) / r
}

/// Checks the circle and wedge closed forms against the brute-force scan.
pub fn validate_oracles() -> Result<Vec<VerifyRecord>> {
    let circle = gen_circle(4096)?;
    let x = circle.vertices()[0];
    // the scan resolves arcs to 2πr/N per end; the polygon differs from the circle by O(1/n²)
    let scan_tol = 4.0 * PI / ORACLE_SAMPLES as f64 + 1e-4;
    let mut cases: Vec<(String, PlanarDomain, Point, f64, f64)> = [0.01, 0.3, 1.2]
        .into_iter()
        .map(|r| (format!("circle-4096 r={r}"), circle.clone(), x, r, circle_epsilon(r)))
        .collect();
    for omega in [PI / 2.0, 3.0 * PI / 2.0] {
        cases.push((format!("wedge omega={omega:.4}"), gen_wedge(omega)?, Point::new(0.0, 0.0), 0.05, wedge_vertex_epsilon(omega)));
    }
    Ok(cases
        .into_par_iter()
        .map(|(name, d, x, r, oracle)| {
            let scan = brute_force_epsilon(&d, x, r, ORACLE_SAMPLES);
            VerifyRecord::absolute("oracle", name, oracle, scan, scan_tol)
        })
        .collect())
}

// ---------------------------------------------------------------- lem1

/// Radial range and ratio stability tolerance of the `𝔞_ψ ≲ ε` suite.
pub const LEM1_R_MIN: f64 = 1e-3;
pub const LEM1_M: f64 = 1.1;
pub const LEM1_STABILITY: f64 = 0.1;
pub const LEM1_POINTWISE_SLACK: f64 = 1e-6;

fn probe_point(c: &CorpusCurve) -> Point {
    let v = c.domain.vertices();
    match c.spec.generator {
        Generator::Wedge { .. } => Point::new(0.0, 0.0),
        Generator::LipschitzGraph { .. } => c.function.as_ref().map(|f| f.point_on_graph(0.3)).unwrap_or(v[0]),
        Generator::Koch { .. } => v[v.len() / 3 + 1],
        _ => v[1 % v.len()],
    }
}

/// Measured constants at per_octave 8 and 16 over the mixed corpus.
pub fn lem1_suite(seed: u64) -> Result<Vec<VerifyRecord>> {
    let kernel = Kernel::new();
    let curves = mixed_corpus(seed).iter().map(|s| s.build()).collect::<Result<Vec<_>>>()?;
    let rows = curves
        .par_iter()
        .map(|c| {
            let x = probe_point(c);
            let a = lem1_check(&c.domain, x, 1.0, LEM1_M, &kernel, LEM1_R_MIN, 8)?;
            let b = lem1_check(&c.domain, x, 1.0, LEM1_M, &kernel, LEM1_R_MIN, 16)?;
            Ok((c.spec.name.clone(), a, b))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    let (mut c8, mut c16): (f64, f64) = (0.0, 0.0);
    for (name, a, b) in &rows {
        c8 = c8.max(a.ratio);
        c16 = c16.max(b.ratio);
        out.push(VerifyRecord::new("lem1", name.clone(), a.lhs, a.rhs_energy, 0.0, a.ratio.is_finite()));
        out.push(VerifyRecord::absolute("lem1-tail", name.clone(), a.tail, 0.0, 0.0));
        let excess = a.pointwise_excess.max(b.pointwise_excess);
        out.push(VerifyRecord::at_most("lem1-pointwise", name.clone(), excess, 0.0, LEM1_POINTWISE_SLACK));
    }
    for (name, a, _) in &rows {
        out.push(VerifyRecord::at_most("lem1-bound", name.clone(), a.lhs, c8 * a.rhs_energy, 1e-12));
    }
    out.push(VerifyRecord::relative("lem1-constant", "corpus", c8, c16, LEM1_STABILITY));
    Ok(out)
}

// ---------------------------------------------------------------- fourier

pub const FOURIER_TOL: f64 = 0.02;
pub const FOURIER_CORPUS: u64 = 20;

pub fn graph_corpus(seed: u64, n: u64, slope_cap: f64) -> Result<Vec<(String, GraphFunction1D)>> {
    (0..n)
        .map(|k| {
            let s = graph_spec(k, seed, slope_cap);
            let f = s.build()?.function.expect("graph");
            Ok((s.name, f))
        })
        .collect()
}

pub fn fourier_suite(seed: u64) -> Result<Vec<VerifyRecord>> {
    let kernel = Kernel::new();
    let constants = kernel_constants(&kernel);
    graph_corpus(seed, FOURIER_CORPUS, DEFAULT_SLOPE_CAP)?
        .into_par_iter()
        .map(|(name, f)| {
            let grid = identity_grid(&f, 8)?;
            let direct = deviation_energy_direct(&f, &kernel, &grid);
            let planch = plancherel_energy(&f, &constants);
            Ok(VerifyRecord::relative("fourier", name, direct, planch, FOURIER_TOL))
        })
        .collect()
}

// ---------------------------------------------------------------- lem54

pub const LEM54_TOL: f64 = 1e-5;
pub const LEM54_SAMPLES: usize = 20;

pub fn lem54_suite(seed: u64) -> Result<Vec<VerifyRecord>> {
    let kernel = Kernel::new();
    let graphs = graph_corpus(seed, 20, DEFAULT_SLOPE_CAP)?;
    let rows = graphs
        .par_iter()
        .enumerate()
        .map(|(k, (name, f))| {
            let domain = f.domain()?;
            let mut rng = SplitMix64::new(seed ^ (0x5EED_0000 + k as u64));
            let mut out = Vec::with_capacity(LEM54_SAMPLES);
            for j in 0..LEM54_SAMPLES {
                let x1 = rng.uniform(-1.2, 1.2);
                let r = 10f64.powf(rng.uniform(-2.0, 0.0));
                let one = graph_a_rho(f, x1, r, &kernel)?;
                let two = a_rho_area_signed(&domain, f.point_on_graph(x1), r, &kernel)?;
                out.push(VerifyRecord::absolute("lem54", format!("{name}#{j}"), one, two, LEM54_TOL));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

// ---------------------------------------------------------------- lips / lemdiff1

pub const LIPS_BRACKET: f64 = 50.0;
pub const LIPS_CORPUS: u64 = 20;
/// Expected drop of `lhs/‖f'‖₂²` when the slope cap halves, and its tolerance factor.
pub const QUARTIC_DROP: f64 = 16.0;
pub const QUARTIC_FACTOR: f64 = 2.0;

pub fn lips_grid() -> RadialGrid {
    RadialGrid::new(1e-3, 1.0, 8).expect("valid grid")
}

pub fn lips_suite(seed: u64) -> Result<Vec<VerifyRecord>> {
    let kernel = Kernel::new();
    let grid = lips_grid();
    let rows = graph_corpus(seed, LIPS_CORPUS, DEFAULT_SLOPE_CAP)?
        .into_par_iter()
        .map(|(name, f)| Ok((name, lips_ratio(&f, &kernel, &grid)?)))
        .collect::<Result<Vec<_>>>()?;
    let lo = rows.iter().map(|r| r.1.ratio).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.1.ratio).fold(0.0, f64::max);
    let mut out: Vec<VerifyRecord> = rows
        .iter()
        .map(|(n, r)| VerifyRecord::new("lips", n.clone(), r.numerator, r.denominator, 0.0, r.ratio > 0.0 && r.ratio.is_finite()))
        .collect();
    out.push(VerifyRecord::at_most("lips-bracket", "corpus", hi, LIPS_BRACKET * lo, 0.0));
    Ok(out)
}

pub fn lemdiff1_suite(seed: u64) -> Result<Vec<VerifyRecord>> {
    let kernel = Kernel::new();
    let grid = lips_grid();
    let rows = (0..10u64)
        .into_par_iter()
        .map(|k| {
            let spec = graph_spec(k, seed, DEFAULT_SLOPE_CAP);
            let full = spec.build()?.function.expect("graph");
            let half = gen_lipschitz_graph(spec.seed, DEFAULT_DEGREE, 0.5 * DEFAULT_SLOPE_CAP, (-1.0, 1.0))?;
            Ok((spec.name, lemdiff1(&full, &kernel, &grid)?, lemdiff1(&half, &kernel, &grid)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    let c = rows.iter().map(|r| r.1.constant.max(r.2.constant)).fold(0.0, f64::max);
    for (name, a, b) in &rows {
        out.push(VerifyRecord::at_most(
            "lemdiff1",
            name.clone(),
            a.lhs,
            c * a.slope_inf.powi(4) * a.deriv_l2_sq,
            1e-300,
        ));
        let drop = (a.lhs / a.deriv_l2_sq) / (b.lhs / b.deriv_l2_sq);
        let ok = drop >= QUARTIC_DROP / QUARTIC_FACTOR && drop <= QUARTIC_DROP * QUARTIC_FACTOR;
        out.push(VerifyRecord::new("lemdiff1-quartic", name.clone(), drop, QUARTIC_DROP, QUARTIC_FACTOR, ok));
    }
    Ok(out)
}

// ---------------------------------------------------------------- construction

/// Atoms per measure in the construction suites.
pub const CONSTRUCTION_ATOMS: usize = 2000;
pub const NOISE_FRACTION: f64 = 0.1;
pub const SLOPE_TARGET: f64 = 0.1;
pub const COVERAGE_TARGET: f64 = 0.5;
pub const CONSTRUCTION_CORPUS: u64 = 4;

/// Measures on slope-capped graphs over `[−1, 1]`, with and without noise.
pub fn construction_corpus(seed: u64) -> Result<Vec<(String, WeightedPointSet)>> {
    let mut out = Vec::new();
    for k in 0..CONSTRUCTION_CORPUS {
        let spec = graph_spec(k, seed, DEFAULT_SLOPE_CAP);
        let domain = spec.build()?.domain;
        out.push((format!("{}-clean", spec.name), sample_measure(&domain, CONSTRUCTION_ATOMS, SampleMode::Arclength)?));
        let noisy = SampleMode::GraphWithNoise { p: NOISE_FRACTION, seed: spec.seed };
        out.push((format!("{}-noisy", spec.name), sample_measure(&domain, CONSTRUCTION_ATOMS, noisy)?));
    }
    Ok(out)
}

pub fn run_constructions(seed: u64) -> Result<Vec<(String, Construction)>> {
    let params = ConstructionParams::default();
    construction_corpus(seed)?
        .into_iter()
        .map(|(name, mu)| Ok((name, Construction::run(&mu, &params)?)))
        .collect()
}

pub fn whitney_records(name: &str, c: &Construction) -> Vec<VerifyRecord> {
    let w = &c.whitney;
    vec![
        VerifyRecord::new("whitney-disjoint", name, w.disjoint as u8 as f64, 1.0, 0.0, w.disjoint),
        VerifyRecord::at_most("whitney-a-lower", name, 5.0, w.min_ratio, 0.0),
        VerifyRecord::at_most("whitney-a-upper", name, w.max_ratio, 50.0, 0.0),
        VerifyRecord::at_most("whitney-b", name, w.max_neighbor_ratio, crate::construction::NEIGHBOR_RATIO_BOUND, 0.0),
        VerifyRecord::at_most("whitney-c", name, w.max_overlap as f64, crate::construction::OVERLAP_BOUND as f64, 0.0),
        VerifyRecord::at_most("whitney-d", name, w.max_uncovered_d, 21.0 * c.cover.floor, 0.0),
    ]
}

pub fn whitney_suite(seed: u64) -> Result<Vec<VerifyRecord>> {
    let mut out = Vec::new();
    let one = SampledLineFunction { f: |_| 1.0, samples: 2 };
    let cover = whitney_cover(&one, 0.0, 1.0, 1.0 / 1024.0, 10.0);
    out.push(VerifyRecord::absolute("whitney-count", "constant-one", cover.len() as f64, 32.0, 0.0));
    let checks = cover.check(&one);
    out.push(VerifyRecord::new("whitney-properties", "constant-one", checks.all_pass() as u8 as f64, 1.0, 0.0, checks.all_pass()));
    let cone = ConeEnvelope::new(vec![(0.0, 0.0)]);
    let cover = whitney_cover(&cone, -1.0, 2.0, 2f64.powi(-14), 0.5);
    let checks = cover.check(&cone);
    out.push(VerifyRecord::new("whitney-properties", "distance-to-origin", checks.all_pass() as u8 as f64, 1.0, 0.0, checks.all_pass()));
    for (name, c) in run_constructions(seed)? {
        out.extend(whitney_records(&name, &c));
    }
    Ok(out)
}

pub fn construction_records(name: &str, c: &Construction) -> Vec<VerifyRecord> {
    let d = &c.diagnostics;
    let s = &c.samples;
    vec![
        VerifyRecord::at_most("graph-slope", name, s.max_slope, SLOPE_TARGET, 0.0),
        VerifyRecord::at_most("z-coverage", name, COVERAGE_TARGET, c.fractions.z, 0.0),
        VerifyRecord::new("piperp-lip", name, d.pair_violations as f64, d.pair_count as f64, 0.0, d.pair_bound_holds()),
        VerifyRecord::at_most("graph-covers-z", name, d.z_max_dist, d.z_tolerance, 0.0),
        VerifyRecord::at_most("graph-support", name, s.outside_support, 0.0, 0.0),
        VerifyRecord::at_most("partition-of-unity", name, s.partition_error, 0.0, 1e-9),
        VerifyRecord::new("h-bound", name, d.h_bound_ok as u8 as f64, 1.0, 0.0, d.h_bound_ok),
        VerifyRecord::new("dist-to-graph-constant", name, d.dist_to_graph_constant, 1.0, 0.0, d.dist_to_graph_constant.is_finite()),
        VerifyRecord::new("flat-dist-constant", name, d.flat_dist_constant, 1.0, 0.0, d.flat_dist_constant.is_finite()),
        VerifyRecord::new("graph-height-constant", name, d.graph_height_constant, 1.0, 0.0, d.graph_height_constant.is_finite()),
    ]
}

pub fn diagnostics_suite(seed: u64) -> Result<Vec<VerifyRecord>> {
    Ok(run_constructions(seed)?.iter().flat_map(|(n, c)| construction_records(n, c)).collect())
}

/// Suite id from a command-line name.
pub fn suite_or_error(name: &str) -> Result<Suite> {
    Suite::parse(name).ok_or_else(|| {
        let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        Error::InvalidInput(format!("unknown suite `{name}` (known: {})", known.join(", ")))
    })
}

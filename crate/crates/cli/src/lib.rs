//! Command implementations behind the `carleson` binary. Every command returns
//! its artifacts as strings so that the binary only handles I/O and exit codes.

pub mod svg;

use std::collections::BTreeMap;
use std::fmt::Write;

use carleson_core::construction::{Construction, ConstructionParams, WeightedPointSet};
use carleson_core::corpus::{boundary_samples, CorpusSpec, Generator, SampleMode};
use carleson_core::multiscale::{coefficient_report, octave_scales, tangent_detect, TangentVerdict, DEFAULT_APERTURES};
use carleson_core::verify::{suite_or_error, validate_oracles, SuiteReport, VerifyRecord, SLOPE_TARGET};
use carleson_core::{CurveFile, Error, Kernel, PlanarDomain, Point, RadialGrid};
use rayon::prelude::*;
use serde::Serialize;

use svg::{heat, Canvas};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

/// A failed command and the process exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        CliError { code: EXIT_FAILURE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::Parse(_) | Error::Precondition(_) => CliError::input(e.to_string()),
            _ => CliError::failure(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Everything that determines a command's output; echoed into every artifact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<String>,
    pub r_min: f64,
    pub r_max: f64,
    pub per_octave: usize,
    pub theta: f64,
    pub alpha: f64,
    pub flat_param: f64,
    pub c0: f64,
    pub seed: u64,
    pub out: Option<String>,
    pub render: bool,
    /// Command-specific options, keyed by flag name.
    pub options: BTreeMap<String, String>,
}

pub const DEFAULT_R_MIN: f64 = 1e-3;
pub const DEFAULT_R_MAX: f64 = 1.0;
pub const DEFAULT_PER_OCTAVE: usize = 8;

impl Default for RunConfig {
    fn default() -> Self {
        let p = ConstructionParams::default();
        RunConfig {
            command: String::new(),
            inputs: Vec::new(),
            r_min: DEFAULT_R_MIN,
            r_max: DEFAULT_R_MAX,
            per_octave: DEFAULT_PER_OCTAVE,
            theta: p.theta,
            alpha: p.alpha,
            flat_param: p.flat_param,
            c0: p.c0,
            seed: 0,
            out: None,
            render: false,
            options: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Header<'a> {
    pub version: &'static str,
    pub config: &'a RunConfig,
}

impl RunConfig {
    pub fn header(&self) -> Header<'_> {
        Header { version: VERSION, config: self }
    }

    /// Header as `# `-prefixed lines for CSV files.
    pub fn csv_header(&self) -> Vec<String> {
        vec![
            format!("carleson {VERSION}"),
            format!("config {}", serde_json::to_string(self).expect("config serializes")),
        ]
    }

    pub fn header_comment(&self) -> String {
        self.csv_header().join(" | ")
    }

    pub fn grid(&self) -> CliResult<RadialGrid> {
        Ok(RadialGrid::new(self.r_min, self.r_max, self.per_octave)?)
    }

    pub fn construction_params(&self) -> ConstructionParams {
        ConstructionParams {
            theta: self.theta,
            alpha: self.alpha,
            flat_param: self.flat_param,
            c0: self.c0,
            ..ConstructionParams::default()
        }
    }
}

/// A named output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    fn new(name: impl Into<String>, contents: String) -> Self {
        Artifact { name: name.into(), contents }
    }
}

/// Artifacts plus a short human-readable summary and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub summary: String,
    pub code: i32,
}

fn csv_with_header(cfg: &RunConfig, columns: &str, rows: &[String]) -> String {
    let mut s = String::new();
    for h in cfg.csv_header() {
        writeln!(s, "# {h}").unwrap();
    }
    writeln!(s, "{columns}").unwrap();
    for r in rows {
        s.push_str(r);
        s.push('\n');
    }
    s
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_curve(text: &str) -> CliResult<PlanarDomain> {
    Ok(carleson_core::parse_curve_json(text)?)
}

pub fn parse_measure(text: &str) -> CliResult<WeightedPointSet> {
    Ok(WeightedPointSet::from_csv(text)?)
}

fn option<T: std::str::FromStr>(cfg: &RunConfig, key: &str, default: T) -> CliResult<T> {
    match cfg.options.get(key) {
        None => Ok(default),
        Some(v) => v.parse().map_err(|_| CliError::input(format!("--{key}: cannot parse {v:?}"))),
    }
}

// ---------------------------------------------------------------- analyze

pub const DEFAULT_SAMPLES: usize = 64;

/// Energies and the `β∞` profile at boundary samples: one CSV row per point.
pub fn cmd_analyze(cfg: &RunConfig, domain: &PlanarDomain) -> CliResult<Outcome> {
    let grid = cfg.grid()?;
    let n: usize = option(cfg, "samples", DEFAULT_SAMPLES)?;
    if n == 0 {
        return Err(CliError::input("--samples must be positive"));
    }
    let kernel = Kernel::new();
    let points = boundary_samples(domain, n);
    let reports = points
        .par_iter()
        .map(|&x| coefficient_report(domain, x, &grid, &kernel))
        .collect::<Result<Vec<_>, _>>()?;
    let mut columns = String::from("x,y,eps_energy,alpha_energy,apsi_energy");
    for r in octave_scales(&grid) {
        write!(columns, ",beta_r={r}").unwrap();
    }
    let rows: Vec<String> = reports
        .iter()
        .map(|c| {
            let mut s = format!("{},{},{},{},{}", c.point.x, c.point.y, c.eps_energy, c.alpha_energy, c.a_psi_energy);
            for (_, b) in &c.beta_profile {
                write!(s, ",{b}").unwrap();
            }
            s
        })
        .collect();
    let mut artifacts = vec![Artifact::new("analyze.csv", csv_with_header(cfg, &columns, &rows))];
    if cfg.render {
        let top = reports.iter().map(|c| c.eps_energy).fold(0.0, f64::max);
        let mut canvas = Canvas::fit(domain.vertices(), &cfg.header_comment());
        canvas.polyline(domain.vertices(), is_closed(domain), "#888888");
        for c in &reports {
            let t = if top > 0.0 { c.eps_energy / top } else { 0.0 };
            canvas.dot(c.point, 3.0, &heat(t));
        }
        artifacts.push(Artifact::new("analyze.svg", canvas.finish()));
    }
    let mut sorted: Vec<f64> = reports.iter().map(|c| c.eps_energy).collect();
    sorted.sort_by(f64::total_cmp);
    let summary = format!("{} points, median eps_energy {}", n, sorted[n / 2]);
    Ok(Outcome { artifacts, summary, code: 0 })
}

fn is_closed(domain: &PlanarDomain) -> bool {
    domain.kind() == carleson_core::DomainKind::JordanPolyline
}

// ---------------------------------------------------------------- tangent

/// Tangent verdicts at boundary samples, plus every vertex when `vertices` is set.
pub fn cmd_tangent(cfg: &RunConfig, domain: &PlanarDomain) -> CliResult<Outcome> {
    let grid = cfg.grid()?;
    let n: usize = option(cfg, "samples", DEFAULT_SAMPLES)?;
    let with_vertices: bool = option(cfg, "vertices", false)?;
    let mut points: Vec<(&str, Point)> = Vec::new();
    if with_vertices {
        points.extend(domain.vertices().iter().map(|&p| ("vertex", p)));
    }
    points.extend(boundary_samples(domain, n).into_iter().map(|p| ("sample", p)));
    let reports = points
        .par_iter()
        .map(|&(_, x)| tangent_detect(domain, x, &grid, &DEFAULT_APERTURES))
        .collect::<Result<Vec<_>, _>>()?;
    let mut tangent = 0;
    let rows: Vec<String> = points
        .iter()
        .zip(&reports)
        .map(|((kind, p), r)| {
            let (verdict, scale, aperture) = match r.verdict {
                TangentVerdict::Tangent { scale } => {
                    tangent += 1;
                    ("tangent", scale.to_string(), String::new())
                }
                TangentVerdict::NotTangent { aperture } => ("not_tangent", String::new(), aperture.to_string()),
                TangentVerdict::Inconclusive => ("inconclusive", String::new(), String::new()),
            };
            format!("{},{},{kind},{verdict},{scale},{aperture}", p.x, p.y)
        })
        .collect();
    let csv = csv_with_header(cfg, "x,y,kind,verdict,finest_passing_scale,failing_aperture", &rows);
    let summary = format!("{tangent}/{} points tangent", points.len());
    Ok(Outcome { artifacts: vec![Artifact::new("tangent.csv", csv)], summary, code: 0 })
}

// ---------------------------------------------------------------- verify

#[derive(Serialize)]
struct VerifyOutput<'a> {
    header: Header<'a>,
    oracles: &'a [VerifyRecord],
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a SuiteReport>,
}

/// Oracle self-check, then one suite. Exit 3 when an oracle disagrees with its
/// brute-force scan, 1 when a suite record fails.
pub fn cmd_verify(cfg: &RunConfig, suite: &str) -> CliResult<Outcome> {
    let suite = suite_or_error(suite)?;
    let name = format!("verify-{}.json", suite.name());
    let oracles = validate_oracles()?;
    if oracles.iter().any(|r| !r.pass) {
        let out = VerifyOutput { header: cfg.header(), oracles: &oracles, report: None };
        let bad: Vec<&str> = oracles.iter().filter(|r| !r.pass).map(|r| r.corpus_item.as_str()).collect();
        return Ok(Outcome {
            artifacts: vec![Artifact::new(name, json(&out))],
            summary: format!("oracle self-validation failed: {}", bad.join(", ")),
            code: EXIT_ORACLE,
        });
    }
    let report = suite.run(cfg.seed)?;
    let out = VerifyOutput { header: cfg.header(), oracles: &oracles, report: Some(&report) };
    let failed = report.failures().count();
    let summary = format!("suite {}: {}/{} records pass", report.suite, report.records.len() - failed, report.records.len());
    Ok(Outcome {
        artifacts: vec![Artifact::new(name, json(&out))],
        summary,
        code: if report.pass { 0 } else { EXIT_FAILURE },
    })
}

// ---------------------------------------------------------------- build-graph

#[derive(Serialize)]
struct PieceOut {
    interval: [f64; 2],
    slope: f64,
    intercept: f64,
}

#[derive(Serialize)]
struct GraphOutput<'a> {
    header: Header<'a>,
    /// Maps input coordinates to the frame of `grid` and `values`.
    frame: carleson_core::Frame,
    grid: &'a [f64],
    values: &'a [f64],
    pieces: Vec<PieceOut>,
    z_mass_fraction: f64,
    ld_mass_fraction: f64,
    ba_mass_fraction: f64,
    max_slope: f64,
    whitney: &'a carleson_core::construction::WhitneyChecks,
    diagnostics: &'a carleson_core::construction::Diagnostics,
}

/// Stopping-time construction on a measure file; graph JSON, SVG and summary.
pub fn cmd_build_graph(cfg: &RunConfig, mu: &WeightedPointSet) -> CliResult<Outcome> {
    let mut params = cfg.construction_params();
    params.root_radius = option(cfg, "radius", params.root_radius)?;
    params.root_center = Point::new(option(cfg, "center-x", 0.0)?, option(cfg, "center-y", 0.0)?);
    let mut notes = Vec::new();
    let density = mu.total_mass() / params.root_radius;
    if density < params.c0 {
        notes.push(format!("warning: root ball density {density} is below c0 = {}; proceeding with c0 = {density}", params.c0));
        params.c0 = density;
    }
    let c = Construction::run(mu, &params).map_err(|e| match e {
        Error::InvalidInput(_) | Error::Parse(_) | Error::Precondition(_) => CliError::from(e),
        other => CliError::failure(format!(
            "construction aborted: {}",
            serde_json::to_string(&ErrorOut::from(&other)).expect("error serializes")
        )),
    })?;
    let out = GraphOutput {
        header: cfg.header(),
        frame: c.frame,
        grid: &c.samples.grid,
        values: &c.samples.values,
        pieces: c
            .graph
            .pieces
            .iter()
            .map(|p| PieceOut { interval: [p.interval.0, p.interval.1], slope: p.slope, intercept: p.intercept })
            .collect(),
        z_mass_fraction: c.fractions.z,
        ld_mass_fraction: c.fractions.ld,
        ba_mass_fraction: c.fractions.ba,
        max_slope: c.samples.max_slope,
        whitney: &c.whitney,
        diagnostics: &c.diagnostics,
    };
    let mut canvas = Canvas::fit(mu.points(), &cfg.header_comment());
    draw_measure(&mut canvas, mu);
    draw_graph(&mut canvas, &c.frame, &c.samples.grid, &c.samples.values, mu);
    notes.push(format!(
        "z {:.4} ld {:.4} ba {:.4} max slope {:.4}",
        c.fractions.z, c.fractions.ld, c.fractions.ba, c.samples.max_slope
    ));
    // the slope bound is only claimed for the default angle threshold
    let default_alpha = params.alpha == ConstructionParams::default().alpha;
    let code = if default_alpha && c.samples.max_slope > SLOPE_TARGET {
        notes.push(format!("slope {} exceeds {}", c.samples.max_slope, SLOPE_TARGET));
        EXIT_FAILURE
    } else {
        0
    };
    Ok(Outcome {
        artifacts: vec![Artifact::new("graph.json", json(&out)), Artifact::new("graph.svg", canvas.finish())],
        summary: notes.join("\n"),
        code,
    })
}

#[derive(Serialize)]
struct ErrorOut {
    error: String,
    detail: String,
}

impl From<&Error> for ErrorOut {
    fn from(e: &Error) -> Self {
        ErrorOut { error: e.to_string(), detail: format!("{e:?}") }
    }
}

fn draw_measure(canvas: &mut Canvas, mu: &WeightedPointSet) {
    for &p in mu.points() {
        canvas.dot(p, 0.6, "#1f4e9c");
    }
}

/// Graph samples restricted to the horizontal extent of the measure.
fn draw_graph(canvas: &mut Canvas, frame: &carleson_core::Frame, grid: &[f64], values: &[f64], mu: &WeightedPointSet) {
    let local: Vec<Point> = mu.points().iter().map(|&p| frame.to_local(p)).collect();
    let lo = local.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let hi = local.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
    let pts: Vec<Point> = grid
        .iter()
        .zip(values)
        .filter(|(x, _)| **x >= lo && **x <= hi)
        .map(|(&x, &y)| frame.to_global(Point::new(x, y)))
        .collect();
    canvas.polyline(&pts, false, "#c0392b");
}

// ---------------------------------------------------------------- gen

/// Corpus generator from its kind name and options.
pub fn generator_from(cfg: &RunConfig, kind: &str) -> CliResult<Generator> {
    Ok(match kind {
        "circle" => Generator::Circle { n: option(cfg, "n", 4096)? },
        "wedge" => Generator::Wedge { omega: option(cfg, "omega", std::f64::consts::FRAC_PI_2)? },
        "koch" => Generator::Koch { depth: option(cfg, "depth", 4)? },
        "square" => Generator::Square,
        "star" => Generator::Star {
            points: option(cfg, "points", 7)?,
            inner: option(cfg, "inner", 0.5)?,
            jitter: option(cfg, "jitter", 0.05)?,
        },
        "line" => Generator::Line,
        "graph" => Generator::LipschitzGraph {
            degree: option(cfg, "degree", carleson_core::corpus::DEFAULT_DEGREE)?,
            slope_cap: option(cfg, "slope-cap", carleson_core::corpus::DEFAULT_SLOPE_CAP)?,
            support: (option(cfg, "support-lo", -1.0)?, option(cfg, "support-hi", 1.0)?),
        },
        other => {
            return Err(CliError::input(format!(
                "unknown generator {other:?} (expected circle, wedge, koch, square, star, line or graph)"
            )))
        }
    })
}

/// A corpus curve as JSON, or a measure on it as CSV when `atoms` is set.
pub fn cmd_gen(cfg: &RunConfig, kind: &str) -> CliResult<Outcome> {
    let spec = CorpusSpec::new(kind, generator_from(cfg, kind)?, cfg.seed);
    let curve = spec.build()?;
    let spec_json = serde_json::to_string(&spec).expect("spec serializes");
    let atoms: usize = option(cfg, "atoms", 0)?;
    if atoms > 0 {
        let noise: f64 = option(cfg, "noise", 0.0)?;
        let mode =
            if noise > 0.0 { SampleMode::GraphWithNoise { p: noise, seed: cfg.seed } } else { SampleMode::Arclength };
        let mu = carleson_core::corpus::sample_measure(&curve.domain, atoms, mode)?;
        let mut header = cfg.csv_header();
        header.push(format!("spec {spec_json}"));
        return Ok(Outcome {
            artifacts: vec![Artifact::new(format!("{kind}.csv"), mu.to_csv(&header))],
            summary: format!("{atoms} atoms, total mass {}", mu.total_mass()),
            code: 0,
        });
    }
    let header = serde_json::json!({ "version": VERSION, "config": cfg, "spec": spec });
    let file = CurveFile::from_domain(&curve.domain, Some(header));
    Ok(Outcome {
        artifacts: vec![Artifact::new(format!("{kind}.json"), json(&file))],
        summary: format!("{} vertices", curve.domain.vertices().len()),
        code: 0,
    })
}

// ---------------------------------------------------------------- render

/// Curve or measure input for rendering.
pub enum RenderInput {
    Curve(PlanarDomain),
    Measure(WeightedPointSet),
}

/// SVG of a curve or measure, with an optional graph JSON overlay.
pub fn cmd_render(cfg: &RunConfig, input: &RenderInput, graph_json: Option<&str>) -> CliResult<Outcome> {
    let mut canvas = match input {
        RenderInput::Curve(d) => {
            let mut c = Canvas::fit(d.vertices(), &cfg.header_comment());
            c.polyline(d.vertices(), is_closed(d), "#222222");
            c
        }
        RenderInput::Measure(mu) => {
            let mut c = Canvas::fit(mu.points(), &cfg.header_comment());
            draw_measure(&mut c, mu);
            c
        }
    };
    if let Some(text) = graph_json {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::input(format!("graph file: line {}: {e}", e.line())))?;
        let field = |k: &str| v.get(k).ok_or_else(|| CliError::input(format!("graph file: missing field `{k}`")));
        let frame: carleson_core::Frame = serde_json::from_value(field("frame")?.clone())
            .map_err(|e| CliError::input(format!("graph file: field `frame`: {e}")))?;
        let nums = |k: &str| -> CliResult<Vec<f64>> {
            serde_json::from_value(field(k)?.clone()).map_err(|e| CliError::input(format!("graph file: field `{k}`: {e}")))
        };
        let (grid, values) = (nums("grid")?, nums("values")?);
        match input {
            RenderInput::Measure(mu) => draw_graph(&mut canvas, &frame, &grid, &values, mu),
            RenderInput::Curve(_) => {
                let pts: Vec<Point> =
                    grid.iter().zip(&values).map(|(&x, &y)| frame.to_global(Point::new(x, y))).collect();
                canvas.polyline(&pts, false, "#c0392b");
            }
        }
    }
    Ok(Outcome { artifacts: vec![Artifact::new("render.svg", canvas.finish())], summary: String::new(), code: 0 })
}

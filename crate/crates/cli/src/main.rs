use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use carleson_cli::{
    cmd_analyze, cmd_build_graph, cmd_gen, cmd_render, cmd_tangent, cmd_verify, parse_curve, parse_measure, CliError,
    CliResult, Outcome, RenderInput, RunConfig, DEFAULT_PER_OCTAVE, DEFAULT_R_MAX, DEFAULT_R_MIN, EXIT_INPUT,
};
use clap::{Args, Parser, Subcommand};

/// Multiscale square functions of planar curves and Lipschitz graph
/// approximation of point measures.
#[derive(Parser)]
#[command(name = "carleson", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Smallest radius of the log grid.
    #[arg(long, global = true, default_value_t = DEFAULT_R_MIN)]
    rmin: f64,
    /// Largest radius of the log grid.
    #[arg(long, global = true, default_value_t = DEFAULT_R_MAX)]
    rmax: f64,
    /// Grid nodes per octave.
    #[arg(long, global = true, default_value_t = DEFAULT_PER_OCTAVE)]
    per_octave: usize,
    /// Density threshold of good balls.
    #[arg(long, global = true)]
    theta: Option<f64>,
    /// Angle threshold of good balls.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Flatness tolerance of the stopped set.
    #[arg(long, global = true)]
    flat_param: Option<f64>,
    /// Lower density bound of the root ball.
    #[arg(long, global = true)]
    c0: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 1 is the reproducibility reference.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory; without it the primary artifact goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Per-point energies and β∞ profile of a curve file.
    Analyze {
        curve: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
        /// Also write a heat rendering (needs --out).
        #[arg(long)]
        svg: bool,
    },
    /// Run a verification suite: lem1, fourier, lem54, lemdiff1, lips, whitney, diagnostics.
    Verify { suite: String },
    /// Approximating Lipschitz graph of a measure file (CSV with header x,y,w).
    BuildGraph {
        measure: PathBuf,
        /// Root ball radius.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        center_x: Option<f64>,
        #[arg(long)]
        center_y: Option<f64>,
    },
    /// Per-point tangent verdicts of a curve file.
    Tangent {
        curve: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
        /// Also test every polygon vertex.
        #[arg(long)]
        vertices: bool,
    },
    /// Write a corpus curve (JSON) or, with --atoms, a measure on it (CSV).
    Gen {
        /// circle, wedge, koch, square, star, line or graph.
        kind: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        inner: Option<f64>,
        #[arg(long)]
        jitter: Option<f64>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        slope_cap: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        support_lo: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        support_hi: Option<f64>,
        #[arg(long)]
        atoms: Option<usize>,
        /// Fraction of the mass moved to off-curve clusters.
        #[arg(long)]
        noise: Option<f64>,
    },
    /// SVG of a curve (.json) or measure (.csv), optionally with a graph overlay.
    Render {
        input: PathBuf,
        #[arg(long)]
        graph: Option<PathBuf>,
    },
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn with_context<T>(path: &Path, r: CliResult<T>) -> CliResult<T> {
    r.map_err(|e| CliError { code: e.code, message: format!("{}: {}", path.display(), e.message) })
}

fn insert<T: ToString>(opts: &mut BTreeMap<String, String>, key: &str, v: Option<T>) {
    if let Some(v) = v {
        opts.insert(key.into(), v.to_string());
    }
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let c = cli.common;
    if let Some(n) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::input(format!("--threads: {e}")))?;
    }
    let mut cfg = RunConfig {
        r_min: c.rmin,
        r_max: c.rmax,
        per_octave: c.per_octave,
        seed: c.seed,
        out: c.out.as_ref().map(|p| p.display().to_string()),
        ..RunConfig::default()
    };
    cfg.theta = c.theta.unwrap_or(cfg.theta);
    cfg.alpha = c.alpha.unwrap_or(cfg.alpha);
    cfg.flat_param = c.flat_param.unwrap_or(cfg.flat_param);
    cfg.c0 = c.c0.unwrap_or(cfg.c0);
    let o = &mut cfg.options;
    match cli.command {
        Command::Analyze { curve, samples, svg } => {
            insert(o, "samples", samples);
            cfg.command = "analyze".into();
            cfg.render = svg;
            cfg.inputs.push(curve.display().to_string());
            let domain = with_context(&curve, parse_curve(&read(&curve)?))?;
            cmd_analyze(&cfg, &domain)
        }
        Command::Verify { suite } => {
            insert(o, "suite", Some(&suite));
            cfg.command = "verify".into();
            cmd_verify(&cfg, &suite)
        }
        Command::BuildGraph { measure, radius, center_x, center_y } => {
            insert(o, "radius", radius);
            insert(o, "center-x", center_x);
            insert(o, "center-y", center_y);
            cfg.command = "build-graph".into();
            cfg.render = true;
            cfg.inputs.push(measure.display().to_string());
            let mu = with_context(&measure, parse_measure(&read(&measure)?))?;
            cmd_build_graph(&cfg, &mu)
        }
        Command::Tangent { curve, samples, vertices } => {
            insert(o, "samples", samples);
            insert(o, "vertices", vertices.then_some(true));
            cfg.command = "tangent".into();
            cfg.inputs.push(curve.display().to_string());
            let domain = with_context(&curve, parse_curve(&read(&curve)?))?;
            cmd_tangent(&cfg, &domain)
        }
        Command::Gen {
            kind,
            n,
            omega,
            depth,
            points,
            inner,
            jitter,
            degree,
            slope_cap,
            support_lo,
            support_hi,
            atoms,
            noise,
        } => {
            insert(o, "n", n);
            insert(o, "omega", omega);
            insert(o, "depth", depth);
            insert(o, "points", points);
            insert(o, "inner", inner);
            insert(o, "jitter", jitter);
            insert(o, "degree", degree);
            insert(o, "slope-cap", slope_cap);
            insert(o, "support-lo", support_lo);
            insert(o, "support-hi", support_hi);
            insert(o, "atoms", atoms);
            insert(o, "noise", noise);
            cfg.command = "gen".into();
            cmd_gen(&cfg, &kind)
        }
        Command::Render { input, graph } => {
            cfg.command = "render".into();
            cfg.render = true;
            cfg.inputs.push(input.display().to_string());
            let text = read(&input)?;
            let parsed = if input.extension().is_some_and(|e| e == "csv") {
                RenderInput::Measure(with_context(&input, parse_measure(&text))?)
            } else {
                RenderInput::Curve(with_context(&input, parse_curve(&text))?)
            };
            let graph_text = match &graph {
                Some(p) => {
                    cfg.inputs.push(p.display().to_string());
                    Some(read(p)?)
                }
                None => None,
            };
            cmd_render(&cfg, &parsed, graph_text.as_deref())
        }
    }
}

fn emit(outcome: &Outcome, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
            for a in &outcome.artifacts {
                let path = dir.join(&a.name);
                std::fs::write(&path, &a.contents).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            }
        }
        None => {
            if let Some(a) = outcome.artifacts.first() {
                print!("{}", a.contents);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let out = cli.common.out.clone();
    let result = run(cli).and_then(|o| emit(&o, out.as_deref()).map(|_| o));
    match result {
        Ok(o) => {
            if !o.summary.is_empty() {
                eprintln!("{}", o.summary);
            }
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}

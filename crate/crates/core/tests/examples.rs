//! Worked examples with independently computed expected values.

use std::f64::consts::PI;

use carleson_core::construction::{Construction, ConstructionParams, PointLabel, WeightedPointSet};
use carleson_core::corpus::*;
use carleson_core::multiscale::{carleson_energy, epsilon_coeff};
use carleson_core::spectral::kernel_constants;
use carleson_core::verify::brute_force_epsilon;
use carleson_core::{Kernel, PlanarDomain, Point, RadialGrid};

#[test]
fn circle_arc_lengths_follow_the_law_of_cosines() {
    let d = gen_circle(4096).unwrap();
    let x = d.vertices()[0];
    assert_eq!(x, Point::new(1.0, 0.0));
    let p = d.circle_profile(x, 1.0).unwrap();
    // ℋ¹(I⁺) = 2r·arccos(r/2) for a circle of radius r centred on the unit circle
    let inside = 2.0 * 1.0 * (0.5f64).acos();
    assert!((p.len_i_plus - inside).abs() < 1e-3, "{}", p.len_i_plus);
    let centre = d.circle_profile(Point::new(0.0, 0.0), 0.5).unwrap();
    assert!((centre.len_i_plus - PI).abs() < 1e-12 && centre.len_i_minus == 0.0);
}

#[test]
fn circle_epsilon_matches_brute_force_scan() {
    let d = gen_circle(4096).unwrap();
    let x = d.vertices()[17];
    for r in [0.05, 0.4, 1.3] {
        let e = epsilon_coeff(&d, x, r).unwrap();
        let scan = brute_force_epsilon(&d, x, r, 200_000);
        assert!((e - scan).abs() < 1e-4, "r={r}: {e} vs {scan}");
        assert!((e - circle_epsilon(r)).abs() < 1e-3);
    }
}

#[test]
fn wedge_vertex_epsilon_is_the_angle_defect() {
    for omega in [PI, PI / 2.0, 1.5 * PI, 0.7] {
        let d = gen_wedge(omega).unwrap();
        for r in [1e-3, 0.03, 0.1] {
            let e = epsilon_coeff(&d, Point::new(0.0, 0.0), r).unwrap();
            assert!((e - (PI - omega).abs()).abs() < 1e-9, "omega={omega} r={r}: {e}");
        }
    }
}

#[test]
fn koch_geometry() {
    assert_eq!(gen_koch(0).unwrap().vertices().len(), 3);
    assert_eq!(gen_koch(3).unwrap().vertices().len(), 192);
    for k in 0..5 {
        let p = gen_koch(k).unwrap().perimeter();
        assert!((p - 3.0 * (4.0f64 / 3.0).powi(k as i32)).abs() < 1e-9);
    }
}

#[test]
fn graph_generator_hits_the_slope_cap() {
    let f = gen_lipschitz_graph(3, 6, 0.05, (-1.0, 1.0)).unwrap();
    // dense-grid divided differences of the piecewise linear function
    let n = 200_000;
    let mut worst: f64 = 0.0;
    let mut prev = f.eval(-1.0);
    for k in 1..=n {
        let x = -1.0 + 2.0 * k as f64 / n as f64;
        let v = f.eval(x);
        worst = worst.max((v - prev).abs() * n as f64 / 2.0);
        prev = v;
    }
    assert!((worst - 0.05).abs() < 1e-9, "{worst}");
    assert!(f.eval(-1.0) == 0.0 && f.eval(1.0) == 0.0 && f.eval(1.5) == 0.0);
    let zero = gen_lipschitz_graph(3, 6, 0.0, (-1.0, 1.0)).unwrap();
    assert_eq!(zero.max_slope(), 0.0);
}

#[test]
fn arclength_measures() {
    let circle = gen_circle(4096).unwrap();
    let mu = sample_measure(&circle, 5000, SampleMode::Arclength).unwrap();
    assert!((mu.total_mass() - circle.perimeter()).abs() < 1e-9);
    // the line measure on [−1, 1] has density μ(B)/r equal to 1 on B(0, 2)
    let line = sample_measure(&PlanarDomain::line(), 1000, SampleMode::Arclength).unwrap();
    assert!((line.mass_in_ball(Point::new(0.0, 0.0), 2.0) / 2.0 - 1.0).abs() < 1e-12);
}

#[test]
fn noise_moves_the_requested_mass_off_the_graph() {
    let d = gen_lipschitz_graph(5, 6, 0.05, (-1.0, 1.0)).unwrap().domain().unwrap();
    let n = 2000;
    let mu = sample_measure(&d, n, SampleMode::GraphWithNoise { p: 0.1, seed: 9 }).unwrap();
    let off: f64 = mu
        .points()
        .iter()
        .zip(mu.weights())
        .filter(|(p, _)| d.dist_within(**p, 1.0) > 1e-9)
        .map(|(_, w)| w)
        .sum();
    assert!((off / mu.total_mass() - 0.1).abs() <= 1.0 / n as f64);
}

#[test]
fn kernel_fourier_constant_is_positive_and_finite() {
    let c = kernel_constants(&Kernel::new());
    assert!(c.tilde_c > 0.0 && c.tilde_c.is_finite());
}

#[test]
fn circle_energy_matches_closed_form_integral() {
    let d = gen_circle(4096).unwrap();
    let grid = RadialGrid::new(1e-3, 1.0, 8).unwrap();
    let e = carleson_energy(&d, d.vertices()[100], &grid).unwrap();
    // ∫ (2 arcsin(r/2))² dr/r by a fine midpoint rule in ln r
    let n = 200_000;
    let h = (1e3f64).ln() / n as f64;
    let exact: f64 = (0..n).map(|k| circle_epsilon((-(k as f64 + 0.5) * h).exp()).powi(2) * h).sum();
    assert!((e - exact).abs() < 1e-3, "{e} vs {exact}");
}

fn line_measure(slope: f64, n: usize) -> WeightedPointSet {
    let c = (1.0 + slope * slope).sqrt();
    let pts = (0..n).map(|k| {
        let t = -1.0 + 2.0 * (k as f64 + 0.5) / n as f64;
        Point::new(t, slope * t) * (1.0 / c)
    });
    WeightedPointSet::uniform(pts.collect(), 2.0).unwrap()
}

#[test]
fn construction_on_the_axis_is_trivial() {
    let c = Construction::run(&line_measure(0.0, 1000), &ConstructionParams::default()).unwrap();
    assert!(c.fractions.z >= 0.99);
    assert!(c.samples.values.iter().all(|&v| v == 0.0));
    assert_eq!(c.samples.max_slope, 0.0);
    assert!(c.diagnostics.pair_bound_holds() && c.diagnostics.h_bound_ok);
}

#[test]
fn construction_follows_a_tilted_line() {
    let s = 0.5 * ConstructionParams::default().alpha;
    let c = Construction::run(&line_measure(s, 1000), &ConstructionParams::default()).unwrap();
    assert!(c.fractions.z >= 0.99);
    // slope of G_A back in input coordinates over the central half of B₀
    let g: Vec<Point> = c
        .samples
        .grid
        .iter()
        .zip(&c.samples.values)
        .filter(|(p, _)| p.abs() <= 0.5)
        .map(|(&p, &v)| c.frame.to_global(Point::new(p, v)))
        .collect();
    for w in g.windows(2) {
        let slope = (w[1].y - w[0].y) / (w[1].x - w[0].x);
        assert!(slope >= 0.5 * s && slope <= 2.0 * s, "{slope}");
    }
    assert_eq!(c.diagnostics.pair_violations, 0);
    assert!(c.diagnostics.pair_worst_ratio < 1.0);
}

#[test]
fn stopping_radius_is_at_most_twice_the_root_radius() {
    let d = graph_spec(1, 0, DEFAULT_SLOPE_CAP).build().unwrap().domain;
    let mu = sample_measure(&d, 2000, SampleMode::GraphWithNoise { p: 0.1, seed: 1 }).unwrap();
    let c = Construction::run(&mu, &ConstructionParams::default()).unwrap();
    let r = c.params.root_radius;
    assert!((0..c.measure.len()).all(|i| c.stopping.h(i) <= 2.0 * r));
    // the off-graph clusters never count as captured
    let noisy = c.labels.iter().filter(|l| **l != PointLabel::Z).count();
    assert!(noisy > 0);
    assert!(c.fractions.z >= 0.5);
    assert!((c.fractions.z + c.fractions.ld + c.fractions.ba - 1.0).abs() < 1e-12);
}

#[test]
fn graph_measure_is_captured() {
    let d = graph_spec(2, 0, DEFAULT_SLOPE_CAP).build().unwrap().domain;
    let mu = sample_measure(&d, 2000, SampleMode::Arclength).unwrap();
    let c = Construction::run(&mu, &ConstructionParams::default()).unwrap();
    assert!(c.fractions.z >= 0.5);
    assert!(c.whitney.all_pass());
    assert!(c.diagnostics.graph_covers_z());
    assert_eq!(c.samples.outside_support, 0.0);
}

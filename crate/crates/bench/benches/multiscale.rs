use criterion::{black_box, criterion_group, criterion_main, Criterion};

use carleson_core::construction::{Construction, ConstructionParams};
use carleson_core::corpus::{gen_circle, gen_koch};
use carleson_core::multiscale::{a_psi, beta_inf, carleson_energy, epsilon_coeff};
use carleson_core::spectral::kernel_constants;
use carleson_core::verify::construction_corpus;
use carleson_core::{Kernel, RadialGrid};

fn coefficients(c: &mut Criterion) {
    let circle = gen_circle(4096).unwrap();
    let koch = gen_koch(5).unwrap();
    let kernel = Kernel::new();
    let x = circle.vertices()[0];
    c.bench_function("epsilon_circle_4096", |b| b.iter(|| epsilon_coeff(&circle, black_box(x), 0.1).unwrap()));
    c.bench_function("beta_inf_koch_5", |b| {
        b.iter(|| beta_inf(&koch, black_box(koch.vertices()[koch.vertices().len() / 3]), 0.05).unwrap())
    });
    c.bench_function("a_psi_circle_4096", |b| b.iter(|| a_psi(&circle, black_box(x), 0.1, &kernel).unwrap()));
}

fn energies(c: &mut Criterion) {
    let koch = gen_koch(5).unwrap();
    let grid = RadialGrid::new(1e-3, 1.0, 8).unwrap();
    c.bench_function("carleson_energy_koch_5", |b| {
        b.iter(|| carleson_energy(&koch, black_box(koch.vertices()[koch.vertices().len() / 3]), &grid).unwrap())
    });
}

fn spectral(c: &mut Criterion) {
    let kernel = Kernel::new();
    c.bench_function("kernel_constants", |b| b.iter(|| kernel_constants(black_box(&kernel))));
}

fn construction(c: &mut Criterion) {
    let (_, mu) = construction_corpus(0).unwrap().swap_remove(0);
    let params = ConstructionParams::default();
    let mut g = c.benchmark_group("construction");
    g.sample_size(10);
    g.bench_function("graph_2000_atoms", |b| b.iter(|| Construction::run(black_box(&mu), &params).unwrap()));
    g.finish();
}

criterion_group!(benches, coefficients, energies, spectral, construction);
criterion_main!(benches);

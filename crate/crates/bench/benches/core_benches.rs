//! Criterion benchmarks for the hot paths: Weyl group construction, the
//! rectangle transform, Weyl denominator evaluation, and a small end-to-end
//! local-constant run.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use hylie_core::localhy::{
    estimate_local_constant, LocalParams, Profile, ProfileKind,
};
use hylie_core::spectral::{central_fourier_from_numerator, random_character_poly};
use hylie_core::torus::{
    rectangle_transform_many, weyl_denominator, weyl_denominator_grid, TorusGrid,
};
use hylie_core::{RootSystem, WeylGroup};

fn setup(label: &str) -> (RootSystem, WeylGroup) {
    let rs = RootSystem::new(label.parse().unwrap()).unwrap();
    let wg = WeylGroup::new(&rs).unwrap();
    (rs, wg)
}

fn bench_weyl_group(c: &mut Criterion) {
    let mut g = c.benchmark_group("weyl_group_construction");
    for label in ["A2", "B2", "G2", "A3"] {
        let rs = RootSystem::new(label.parse().unwrap()).unwrap();
        g.bench_function(label, |b| {
            b.iter(|| WeylGroup::new(black_box(&rs)).unwrap())
        });
    }
    g.finish();
}

fn bench_rectangle_transform(c: &mut Criterion) {
    let mut g = c.benchmark_group("rectangle_transform");
    let (rs, wg) = setup("A2");
    for n in [64usize, 128] {
        let grid = TorusGrid::new(2, n).unwrap();
        let poly = random_character_poly(&rs, 3, 6, 4).unwrap();
        let h = poly.numerator_grid(&rs, &wg, grid).unwrap();
        let ball = rs.enumerate_shifted_dominant(16.0).unwrap();
        g.bench_function(format!("A2_N{n}_{}weights", ball.len()), |b| {
            b.iter(|| rectangle_transform_many(black_box(&h), black_box(&ball)).unwrap())
        });
    }
    g.finish();
}

fn bench_weyl_denominator(c: &mut Criterion) {
    let mut g = c.benchmark_group("weyl_denominator");
    for label in ["A2", "G2"] {
        let (rs, _) = setup(label);
        let x = [0.173, -0.294];
        g.bench_function(format!("{label}_pointwise"), |b| {
            b.iter(|| weyl_denominator(black_box(&rs), black_box(&x)))
        });
        g.bench_function(format!("{label}_grid64"), |b| {
            let grid = TorusGrid::new(2, 64).unwrap();
            b.iter(|| weyl_denominator_grid(black_box(&rs), black_box(grid)).unwrap())
        });
    }
    g.finish();
}

fn bench_spectrum(c: &mut Criterion) {
    let (rs, wg) = setup("A2");
    let grid = TorusGrid::new(2, 128).unwrap();
    let poly = random_character_poly(&rs, 5, 6, 4).unwrap();
    let h = poly.numerator_grid(&rs, &wg, grid).unwrap();
    let cutoff = 32.0f64.max(poly.min_cutoff(&rs));
    c.bench_function("central_spectrum_A2_N128", |b| {
        b.iter_batched(
            || h.clone(),
            |h| central_fourier_from_numerator(black_box(&rs), &h, cutoff).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_local_run(c: &mut Criterion) {
    let (rs, wg) = setup("A1");
    let profile = Profile::new(ProfileKind::SmoothBump, 0.4).unwrap();
    let mut params = LocalParams::for_rank(1);
    params.grid_n = 256;
    params.xi_max = 20.0;
    params.xi_step = 0.1;
    params.euclid_n = 256;
    c.bench_function("local_constant_A1_N256_k12", |b| {
        b.iter(|| {
            estimate_local_constant(
                black_box(&rs),
                black_box(&wg),
                profile,
                1.5,
                &[1, 2],
                &params,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_weyl_group,
    bench_rectangle_transform,
    bench_weyl_denominator,
    bench_spectrum,
    bench_local_run
);
criterion_main!(benches);

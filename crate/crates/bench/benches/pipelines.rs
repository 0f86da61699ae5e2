use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use freewreath_core::freeconv::{free_add_conv, free_mul_conv, nc_moment_oracle, nsv_check};
use freewreath_core::graphs::{automorphism_group, named_graph};
use freewreath_core::measures::moments_of;
use freewreath_core::stieltjes::density_moment_check;
use freewreath_core::transforms::{free_cumulants, s_transform, theta_series};
use freewreath_core::{CatalogMeasure, ClosedFormG, MomentSequence};

fn cat(name: &str, order: usize) -> MomentSequence {
    moments_of(&name.parse::<CatalogMeasure>().unwrap(), order).unwrap()
}

fn transforms(c: &mut Criterion) {
    let mut g = c.benchmark_group("s_transform");
    for order in [8, 12, 16] {
        let m = cat("two_rectangles", order);
        g.bench_with_input(BenchmarkId::from_parameter(order), &m, |b, m| {
            b.iter(|| s_transform(black_box(m), order).unwrap())
        });
    }
    g.finish();
    let m = cat("cube", 12);
    c.bench_function("theta_series/cube/12", |b| b.iter(|| theta_series(black_box(&m), 12).unwrap()));
}

fn convolutions(c: &mut Criterion) {
    let (a, b) = (cat("uniform_group:4", 16), cat("eta:2", 16));
    c.bench_function("free_mul_conv/16", |bch| bch.iter(|| free_mul_conv(black_box(&a), black_box(&b), 16).unwrap()));
    c.bench_function("free_add_conv/16", |bch| bch.iter(|| free_add_conv(black_box(&a), black_box(&b), 16).unwrap()));
    let mu = cat("dihedral:5", 10);
    c.bench_function("nsv_check/dihedral5/n4/10", |bch| bch.iter(|| nsv_check(black_box(&mu), 4, 10).unwrap()));
    let (x, y) = (cat("eta:3", 8), cat("eta:3", 8));
    let kappa = free_cumulants(&x).unwrap();
    c.bench_function("nc_moment_oracle/8", |bch| bch.iter(|| nc_moment_oracle(black_box(&kappa), black_box(&y), 8).unwrap()));
}

fn graphs(c: &mut Criterion) {
    let mut g = c.benchmark_group("automorphism_group");
    for name in ["cube", "two_rectangles", "simplex:6", "ngon:10"] {
        let x = named_graph(name).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(name), &x, |b, x| b.iter(|| automorphism_group(black_box(x)).unwrap()));
    }
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    c.bench_function("density_moment_check/two_rectangles/k6", |b| {
        b.iter(|| density_moment_check(ClosedFormG::TwoRectangles, 6, 1e-5).unwrap())
    });
}

criterion_group!(benches, transforms, convolutions, graphs, quadrature);
criterion_main!(benches);

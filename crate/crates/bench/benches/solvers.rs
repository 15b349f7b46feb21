use corioband_bench::{reference, reference_kp};
use corioband_core::*;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn bench_assembly(c: &mut Criterion) {
    let (params, dc, pattern) = reference(0.02);
    let mut group = c.benchmark_group("assemble_hamiltonian");
    for cutoff in [6, 10] {
        let recip = reciprocal_vectors(params.pitch, cutoff).unwrap();
        let k = PathLabel::T.k(params.pitch);
        group.bench_with_input(BenchmarkId::from_parameter(cutoff), &recip, |b, recip| {
            b.iter(|| assemble_hamiltonian(black_box(k), &pattern, recip, &dc).unwrap());
        });
    }
    group.finish();
}

fn bench_solve(c: &mut Criterion) {
    let (params, dc, pattern) = reference(0.02);
    let mut group = c.benchmark_group("solve_at_k");
    group.sample_size(10);
    for cutoff in [6, 10] {
        let recip = reciprocal_vectors(params.pitch, cutoff).unwrap();
        let h = assemble_hamiltonian(PathLabel::T.k(params.pitch), &pattern, &recip, &dc).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(cutoff), &h, |b, h| {
            b.iter(|| solve_at_k(black_box(h), 8).unwrap());
        });
    }
    group.finish();
}

fn bench_kp(c: &mut Criterion) {
    let params = reference_kp(1e-4, 8);
    let u = std::f64::consts::PI / params.pitch;
    c.bench_function("kp_bands", |b| {
        b.iter(|| kp_bands(black_box([0.03 * u, -0.01 * u]), black_box(1e3), &params).unwrap());
    });
}

fn bench_pattern(c: &mut Criterion) {
    let (params, dc, pattern) = reference(0.02);
    let unit = 2.0 * std::f64::consts::PI / params.pitch;
    c.bench_function("fourier_coefficients_21x21", |b| {
        b.iter(|| {
            let mut sum = 0.0;
            for i in -10..=10 {
                for j in -10..=10 {
                    sum += pattern.fourier_coefficient([unit * i as f64, unit * j as f64]);
                }
            }
            black_box(sum)
        });
    });
    c.bench_function("analytic_m", |b| {
        b.iter(|| analytic_m(black_box(&params), &dc).unwrap());
    });
    c.bench_function("eta_profile_4096", |b| {
        b.iter(|| eta_profile(black_box(0.013), dc.cavity_length, 4096).unwrap());
    });
}

criterion_group!(benches, bench_assembly, bench_solve, bench_kp, bench_pattern);
criterion_main!(benches);

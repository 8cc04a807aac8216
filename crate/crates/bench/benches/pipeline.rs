use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use toric_apery::apery::apery_limit;
use toric_apery::catalog;
use toric_apery::hpreal::{pi_gauss, v16_membrane_value, zeta3_euler_maclaurin, HpReal};
use toric_apery::periods::{period_sequence, period_sequence_naive};
use toric_apery::pfops::{operator_from_series, singular_points};
use toric_apery_bench::workloads;

fn periods(c: &mut Criterion) {
    let mut group = c.benchmark_group("periods");
    group.sample_size(10);
    for (name, phi) in workloads() {
        group.bench_with_input(BenchmarkId::new("pruned", &name), &phi, |b, phi| {
            b.iter(|| period_sequence(black_box(phi), 20))
        });
        group.bench_with_input(BenchmarkId::new("naive", &name), &phi, |b, phi| {
            b.iter(|| period_sequence_naive(black_box(phi), 8))
        });
    }
    group.finish();
}

fn discovery(c: &mut Criterion) {
    let mut group = c.benchmark_group("discovery");
    group.sample_size(10);
    for entry in catalog::all() {
        let series = period_sequence(&entry.phi, 29).values;
        group.bench_with_input(BenchmarkId::from_parameter(entry.name), &series, |b, s| {
            b.iter(|| operator_from_series(black_box(s), 4, 4, 8).unwrap())
        });
    }
    group.finish();
}

fn apery(c: &mut Criterion) {
    let mut group = c.benchmark_group("apery");
    group.sample_size(10);
    for entry in catalog::all() {
        let series = period_sequence(&entry.phi, 29).values;
        let op = operator_from_series(&series, 4, 4, 8).unwrap();
        let rec = op.to_recurrence();
        let singular = singular_points(&op);
        group.bench_function(BenchmarkId::from_parameter(entry.name), |b| {
            b.iter(|| apery_limit(black_box(&rec), &singular, 50, 200).unwrap())
        });
    }
    group.finish();
}

fn numerics(c: &mut Criterion) {
    let mut group = c.benchmark_group("numerics");
    group.sample_size(10);
    for digits in [50u32, 100, 200] {
        group.bench_with_input(BenchmarkId::new("pi_gauss", digits), &digits, |b, &d| {
            b.iter(|| pi_gauss(black_box(d)))
        });
        group.bench_with_input(BenchmarkId::new("zeta3_em", digits), &digits, |b, &d| {
            b.iter(|| zeta3_euler_maclaurin(black_box(d)))
        });
        let x = HpReal::from_int(3, 4 * digits);
        group.bench_with_input(BenchmarkId::new("exp_ln", digits), &x, |b, x| {
            b.iter(|| black_box(x).exp().ln())
        });
    }
    group.bench_function("membrane_20", |b| b.iter(|| v16_membrane_value(black_box(20)).unwrap()));
    group.finish();
}

criterion_group!(benches, periods, discovery, apery, numerics);
criterion_main!(benches);

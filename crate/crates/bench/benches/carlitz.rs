use std::hint::black_box;

use carlitz_core::carlitz::CarlitzTables;
use carlitz_core::period::{period_w_kernel, period_w_product};
use carlitz_core::ramanujan::verify_ramanujan;
use carlitz_core::zeta::zeta_pos;
use carlitz_core::{FieldCtx, Laurent};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn zeta(c: &mut Criterion) {
    let mut g = c.benchmark_group("zeta_pos");
    for (q, m) in [(3u64, 2u32), (3, 6), (5, 4)] {
        let f = FieldCtx::new(q, None).unwrap();
        g.bench_with_input(BenchmarkId::new(format!("q{q}"), m), &m, |b, &m| {
            b.iter(|| zeta_pos(&f, black_box(m), -60, None).unwrap())
        });
    }
    g.finish();
}

fn period(c: &mut Criterion) {
    let f = FieldCtx::prime(3).unwrap();
    c.bench_function("period/product_q3", |b| b.iter(|| period_w_product(&f, black_box(-60)).unwrap()));
    c.bench_function("period/kernel_q3", |b| b.iter(|| period_w_kernel(&f, black_box(-60), None).unwrap()));
}

fn exponential(c: &mut Criterion) {
    let f = FieldCtx::prime(3).unwrap();
    let w = carlitz_core::period::period_w(&f, -80).unwrap();
    let tables = CarlitzTables::build(&f, 6).unwrap();
    let ell = carlitz_core::carlitz::LatticeExp::new(&w, &tables).unwrap();
    let z = Laurent::u(&f).pow(3).unwrap();
    c.bench_function("ell_eval/q3_u3", |b| b.iter(|| ell.eval(black_box(&z), -60).unwrap()));
}

fn ramanujan(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_ramanujan");
    for (q, j) in [(3u64, 1u32), (3, 4), (5, 2)] {
        let f = FieldCtx::new(q, None).unwrap();
        g.bench_with_input(BenchmarkId::new(format!("q{q}"), j), &j, |b, &j| {
            b.iter(|| verify_ramanujan(&f, black_box(j), -60, None).unwrap())
        });
    }
    g.finish();
}

fn bernoulli_carlitz(c: &mut Criterion) {
    let f = FieldCtx::prime(3).unwrap();
    c.bench_function("bc_numbers/q3_to_26", |b| {
        b.iter(|| {
            let t = CarlitzTables::build(&f, 3).unwrap();
            t.bc_numbers(black_box(26)).unwrap()
        })
    });
}

criterion_group!(benches, zeta, period, exponential, ramanujan, bernoulli_carlitz);
criterion_main!(benches);

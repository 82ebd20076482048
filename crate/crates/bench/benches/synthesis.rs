use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use polyloop_bench::{cubic_template, cyclic3, rotation};
use polyloop_core::groebner::buchberger;
use polyloop_core::solve::classify_finiteness;
use polyloop_core::synthesis::{check_invariants, generate_loops, invariant_set};
use polyloop_core::polyring::rat;
use polyloop_core::{Budget, MonomialOrder};

fn bench_invariant_set(c: &mut Criterion) {
    let (g, f) = rotation();
    c.bench_function("invariant_set/rotation", |b| {
        b.iter(|| invariant_set(black_box(&g), black_box(&f), &Budget::unlimited()).unwrap())
    });
}

fn bench_generate(c: &mut Criterion) {
    let (t, inv) = cubic_template();
    let mut group = c.benchmark_group("synthesis");
    group.sample_size(10);
    group.bench_function("generate_loops/cubic", |b| {
        b.iter(|| generate_loops(black_box(&t), black_box(&inv), &Budget::unlimited()).unwrap())
    });
    let sys = generate_loops(&t, &inv, &Budget::unlimited()).unwrap();
    group.bench_function("classify_finiteness/cubic", |b| {
        b.iter(|| classify_finiteness(black_box(&sys), &Budget::unlimited()).unwrap())
    });
    let l = t.instantiate(&[rat(-3), rat(3), rat(1), rat(-1), rat(0)]).unwrap();
    group.bench_function("check_invariants/cubic", |b| {
        b.iter(|| check_invariants(black_box(&l), &inv, &Budget::unlimited()).unwrap())
    });
    group.finish();
}

fn bench_groebner(c: &mut Criterion) {
    let gens = cyclic3();
    for order in [MonomialOrder::DegRevLex, MonomialOrder::Lex] {
        c.bench_function(&format!("buchberger/cyclic3/{order:?}"), |b| {
            b.iter(|| buchberger(black_box(&gens), order).unwrap())
        });
    }
}

criterion_group!(benches, bench_invariant_set, bench_generate, bench_groebner);
criterion_main!(benches);

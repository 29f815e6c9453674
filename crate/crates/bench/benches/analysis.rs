use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use frankl_bench::{power_set, random_batch};
use frankl_core::{
    find_witness, height_decomposition, longest_chain_height, union_closure, verify_all, SetWord,
};

fn bench_height(c: &mut Criterion) {
    let f = power_set(8);
    c.bench_function("peel-power-set-8", |b| {
        b.iter(|| height_decomposition(black_box(&f)).unwrap().h())
    });
    c.bench_function("longest-chain-power-set-8", |b| {
        b.iter(|| longest_chain_height(black_box(&f)))
    });
}

fn bench_closure(c: &mut Criterion) {
    // Ten fixed generators over sixteen elements; the closure has a few
    // hundred members.
    let generators: Vec<SetWord> = [
        0x0f0fu64, 0x00ff, 0x3c3c, 0x8001, 0x4242, 0x1111, 0x0880, 0x6006, 0x9090, 0x00f8,
    ]
    .into_iter()
    .map(SetWord::from_mask)
    .collect();
    c.bench_function("closure-16-elements", |b| {
        b.iter(|| union_closure(black_box(&generators), 16).unwrap().member_count())
    });
}

fn bench_witness(c: &mut Criterion) {
    let batch = random_batch(10, 100);
    c.bench_function("witness-batch-100", |b| {
        b.iter(|| {
            batch
                .iter()
                .map(|f| find_witness(black_box(f)).unwrap().frequency)
                .sum::<usize>()
        })
    });
}

fn bench_census(c: &mut Criterion) {
    c.bench_function("verify-all-3", |b| {
        b.iter(|| verify_all(black_box(3)).unwrap().families)
    });
}

criterion_group!(benches, bench_height, bench_closure, bench_witness, bench_census);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zmetric_core::complements::{is_complement, prune_minimal};
use zmetric_core::nets::{net_check_window, NetSpec, Stride};
use zmetric_core::wordlen::{diophantine_search, GeneratingSetSpec, WordLengthEngine};
use zmetric_core::{BigInt, EventuallyPeriodicSet, FiniteSet, Window};

fn word_length(c: &mut Criterion) {
    let mut group = c.benchmark_group("wordlen");
    group.sample_size(10);
    for cap in [12u32, 20] {
        group.bench_with_input(BenchmarkId::new("lambda3_fresh_engine", cap), &cap, |b, &cap| {
            b.iter(|| {
                let engine = WordLengthEngine::new(GeneratingSetSpec::two_three(cap)).unwrap();
                engine.lambda(3, 10_000).unwrap()
            })
        });
    }
    let engine = WordLengthEngine::new(GeneratingSetSpec::two_three(20)).unwrap();
    engine.word_length(&BigInt::from(149)).unwrap();
    group.bench_function("length_149_warm", |b| {
        b.iter(|| engine.word_length(black_box(&BigInt::from(149))).unwrap())
    });
    group.bench_function("diophantine_200", |b| {
        b.iter(|| diophantine_search(&[BigInt::from(149), BigInt::from(151)], black_box(200)))
    });
    group.finish();
}

fn nets(c: &mut Criterion) {
    let mut group = c.benchmark_group("net_check_window");
    group.sample_size(10);
    let window = Window::new(-2000, 2000).unwrap();
    for h in [1u32, 2] {
        let spec = NetSpec::new(2, h, Stride::TwoHPlusOne).unwrap();
        group.bench_with_input(BenchmarkId::new("g2", h), &spec, |b, spec| {
            b.iter(|| net_check_window(2, spec, spec.h, window, 16).unwrap())
        });
    }
    group.finish();
}

fn complements(c: &mut Criterion) {
    let w = FiniteSet::new([0, 1, 2]).unwrap();
    let all = EventuallyPeriodicSet::all_integers();
    let lumpy = EventuallyPeriodicSet::new(
        6,
        -40,
        40,
        &(-40..=40).filter(|x| x % 5 != 0).collect::<Vec<_>>(),
        &[0, 1, 3],
        &[0, 3, 4],
    )
    .unwrap();
    c.bench_function("is_complement", |b| {
        b.iter(|| is_complement(black_box(&w), black_box(&lumpy)).unwrap())
    });
    let mut group = c.benchmark_group("prune_minimal");
    group.sample_size(10);
    for r in [50i64, 200] {
        let window = Window::new(-r, r).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(r), &window, |b, &window| {
            b.iter(|| prune_minimal(&w, &all, window).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, word_length, nets, complements);
criterion_main!(benches);

//! Benchmarks comparing the parallel and sequential paths of the hot
//! operations: transversal counting, canonicalization, and the catalogue
//! pipelines.
//!
//! Run the sequential baseline with
//! `cargo bench --no-default-features` and the parallel build with plain
//! `cargo bench`; both register under the same benchmark ids so the two
//! reports are directly comparable.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use latin_arrays::catalogue::{
    enumerate_partial_catalogue, extend_catalogue, EnumerateOptions, ExtendOptions,
};
use latin_arrays::sample::{random_latin_array, random_latin_square};
use latin_arrays::transversal::{count_transversals, count_transversals_seq};
use latin_arrays::trisotopy::canonical_form;

fn bench_counting(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let squares: Vec<_> = (0..8).map(|_| random_latin_square(7, &mut rng).unwrap()).collect();

    let mut group = c.benchmark_group("count-transversals-order7");
    group.bench_function("dispatch", |b| {
        b.iter(|| -> u64 { squares.iter().map(count_transversals).sum() })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| -> u64 { squares.iter().map(count_transversals_seq).sum() })
    });
    group.finish();
}

fn bench_canonical(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let arrays: Vec<_> = (0..8)
        .map(|_| random_latin_array(6, 10, &mut rng).unwrap())
        .collect();
    c.bench_function("canonical-form-order6", |b| {
        b.iter_batched(
            || arrays.clone(),
            |arrays| {
                for a in &arrays {
                    canonical_form(a).unwrap();
                }
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_catalogue(c: &mut Criterion) {
    c.bench_function("enumerate-order3", |b| {
        b.iter(|| enumerate_partial_catalogue(3, &EnumerateOptions::default()).unwrap())
    });
    let seeds = enumerate_partial_catalogue(2, &EnumerateOptions::default()).unwrap();
    c.bench_function("extend-order4", |b| {
        b.iter(|| extend_catalogue(&seeds, 4, &ExtendOptions::default()).unwrap())
    });
}

criterion_group!(benches, bench_counting, bench_canonical, bench_catalogue);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_bigint::BigInt;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use hallgroups::dvec::{evaluate_word, g_membership, GWord};
use hallgroups::snf::{smith_normal_form, IntegerMatrix};

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> IntegerMatrix {
    let entries: Vec<BigInt> = (0..dim * dim)
        .map(|_| BigInt::from(rng.gen_range(-50i64..=50)))
        .collect();
    IntegerMatrix::new(dim, dim, entries).unwrap()
}

fn bench_snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("snf");
    for dim in [4usize, 6, 8] {
        group.bench_function(format!("{dim}x{dim}"), |b| {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            b.iter_batched(
                || random_matrix(&mut rng, dim),
                |m| smith_normal_form(&m),
                BatchSize::SmallInput,
            );
        });
    }
    group.finish();
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> String {
    let letters = ['a', 'A', 'f', 'F'];
    (0..len).map(|_| letters[rng.gen_range(0..4)]).collect()
}

fn bench_word_eval(c: &mut Criterion) {
    let mut group = c.benchmark_group("word-eval");
    for len in [16usize, 64, 256] {
        group.bench_function(format!("len-{len}"), |b| {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            b.iter_batched(
                || GWord::parse(&random_word(&mut rng, len)).unwrap(),
                |w| evaluate_word(&w, 2),
                BatchSize::SmallInput,
            );
        });
    }
    group.finish();
}

fn bench_membership(c: &mut Criterion) {
    let mut group = c.benchmark_group("membership");
    for len in [16usize, 64, 256] {
        group.bench_function(format!("len-{len}"), |b| {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            b.iter_batched(
                || {
                    let w = GWord::parse(&random_word(&mut rng, len)).unwrap();
                    evaluate_word(&w, 2)
                },
                |g| g_membership(&g),
                BatchSize::SmallInput,
            );
        });
    }
    group.finish();
}

criterion_group!(benches, bench_snf, bench_word_eval, bench_membership);
criterion_main!(benches);

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rpr_core::{classify_range, family_sieve, ramanujan_primes, win_fraction, PrimeTable};

fn sieve(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_table");
    group.sample_size(10);
    for limit in [1_000_000u64, 10_000_000, 40_000_000] {
        group.bench_with_input(BenchmarkId::from_parameter(limit), &limit, |b, &limit| {
            b.iter(|| PrimeTable::new(black_box(limit)).unwrap())
        });
    }
    group.finish();
}

fn queries(c: &mut Criterion) {
    let table = PrimeTable::new(10_000_000).unwrap();
    c.bench_function("pi_10k_queries", |b| {
        b.iter(|| {
            (1..=10_000u64)
                .map(|i| table.pi(i * 997).unwrap())
                .sum::<u64>()
        })
    });
    c.bench_function("nth_prime_10k_queries", |b| {
        b.iter(|| {
            (1..=10_000u64)
                .map(|i| table.nth_prime(i * 61).unwrap())
                .sum::<u64>()
        })
    });
}

fn families(c: &mut Criterion) {
    let table = PrimeTable::new(4_000_000).unwrap();
    c.bench_function("ramanujan_10k", |b| {
        b.iter(|| ramanujan_primes(&table, black_box(10_000)).unwrap())
    });
    c.bench_function("classify_100k", |b| {
        b.iter(|| classify_range(&table, black_box(100_000)).unwrap())
    });
    c.bench_function("family_sieve_100k", |b| {
        b.iter(|| family_sieve(&table, black_box(100_000)).unwrap())
    });
    c.bench_function("win_fraction_10k", |b| {
        b.iter(|| win_fraction(&table, black_box(10_000)).unwrap())
    });
}

criterion_group!(benches, sieve, queries, families);
criterion_main!(benches);

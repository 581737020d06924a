use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use primemeans::dd::DoubleDouble;
use primemeans::{Precision, PrimeState, PrimeStream, SieveConfig};

fn sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve");
    for count in [100_000usize, 1_000_000] {
        g.throughput(Throughput::Elements(count as u64));
        g.bench_with_input(BenchmarkId::new("stream", count), &count, |b, &count| {
            b.iter(|| PrimeStream::new(SieveConfig::default()).take(count).last())
        });
    }
    g.finish();
}

fn accumulate(c: &mut Criterion) {
    let primes: Vec<u64> = PrimeStream::new(SieveConfig::default()).take(100_000).collect();
    let mut g = c.benchmark_group("advance");
    g.throughput(Throughput::Elements(primes.len() as u64));
    for precision in [Precision::Double, Precision::DoubleDouble] {
        g.bench_function(precision.name(), |b| {
            b.iter(|| primes.iter().fold(PrimeState::empty(precision), |s, &p| s.advance(p)))
        });
    }
    g.finish();

    let state = primes
        .iter()
        .fold(PrimeState::empty(Precision::DoubleDouble), |s, &p| s.advance(p));
    c.bench_function("quantities", |b| b.iter(|| black_box(&state).quantities().unwrap()));
    c.bench_function("dd_ln", |b| {
        b.iter(|| DoubleDouble::from_u64(black_box(1_299_709)).ln())
    });
}

criterion_group!(benches, sieve, accumulate);
criterion_main!(benches);

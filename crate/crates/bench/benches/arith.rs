use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use covol_bench::{cubic_field, gaussian_algebra, gaussian_field};
use covol_core::bounds::{maximal_chain, BoundsConfig};
use covol_core::covolume::enumerate_s_sets;
use covol_core::numfield::{class_number_oracle, count_ideals, dedekind_zeta, split_prime};

fn bench_zeta(c: &mut Criterion) {
    let mut group = c.benchmark_group("dedekind_zeta");
    let qi = gaussian_field();
    let cubic = cubic_field();
    for bound in [1_000u64, 10_000] {
        group.bench_with_input(BenchmarkId::new("Qi", bound), &bound, |b, &bound| {
            b.iter(|| dedekind_zeta(black_box(&qi), 2.0, bound).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("C23", bound), &bound, |b, &bound| {
            b.iter(|| dedekind_zeta(black_box(&cubic), 2.0, bound).unwrap());
        });
    }
    group.finish();
}

fn bench_split(c: &mut Criterion) {
    let cubic = cubic_field();
    let primes = covol_core::modp::primes_up_to(10_000);
    c.bench_function("split_prime/C23 up to 10^4", |b| {
        b.iter(|| {
            for &p in &primes {
                black_box(split_prime(&cubic, p).unwrap());
            }
        });
    });
}

fn bench_ideal_count(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_ideals");
    let qi = gaussian_field();
    for x in [1_000.0f64, 10_000.0] {
        group.bench_with_input(BenchmarkId::new("Qi", x as u64), &x, |b, &x| {
            b.iter(|| count_ideals(black_box(&qi), x).unwrap());
        });
    }
    group.finish();
}

fn bench_class_number_oracle(c: &mut Criterion) {
    c.bench_function("class_number_oracle/-491", |b| {
        b.iter(|| class_number_oracle(black_box(-491)).unwrap());
    });
    c.bench_function("class_number_oracle/fundamental up to 2000", |b| {
        b.iter(|| {
            let mut total = 0u64;
            for d in -2000i64..0 {
                if covol_core::numfield::is_fundamental_discriminant(d) {
                    total += class_number_oracle(d).unwrap();
                }
            }
            black_box(total)
        });
    });
}

fn bench_s_sets_and_chain(c: &mut Criterion) {
    let alg = gaussian_algebra();
    let zeta = dedekind_zeta(alg.field(), 2.0, 10_000).unwrap();
    c.bench_function("enumerate_s_sets/Qi-B23 X=500", |b| {
        b.iter(|| enumerate_s_sets(black_box(&alg), 500.0, 0).unwrap());
    });
    c.bench_function("maximal_chain/Qi-B23 V=10", |b| {
        b.iter(|| maximal_chain(black_box(&alg), &zeta, 10.0, &BoundsConfig::default()).unwrap());
    });
}

criterion_group!(
    benches,
    bench_zeta,
    bench_split,
    bench_ideal_count,
    bench_class_number_oracle,
    bench_s_sets_and_chain
);
criterion_main!(benches);

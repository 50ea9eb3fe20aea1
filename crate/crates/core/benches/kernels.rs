//! Hot kernels on a one-thread pool against the full pool.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hmf::arith::ideal::primes_up_to;
use hmf::arith::Ideal;
use hmf::brandt::BrandtModule;
use hmf::db::{FieldConfig, Pipeline};
use hmf::linalg::charpoly;
use hmf::quat::IdealClassSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pools() -> Vec<(usize, rayon::ThreadPool)> {
    let all = rayon::current_num_threads();
    let mut sizes = vec![1];
    if all > 1 {
        sizes.push(all);
    }
    sizes.into_iter().map(|n| (n, rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap())).collect()
}

fn hecke(c: &mut Criterion) {
    let cfg = FieldConfig::pizer(11).unwrap();
    let level = Ideal::rational(&cfg.field, 35);
    let classes = Arc::new(IdealClassSet::compute(&cfg.order, 35).unwrap());
    let module = BrandtModule::new(classes, &level).unwrap();
    let primes: Vec<_> = primes_up_to(&cfg.field, 40).into_iter().filter(|p| 385 % p.p != 0).collect();
    let mut g = c.benchmark_group("hecke_operators_d11_n35");
    g.sample_size(10);
    for (n, pool) in pools() {
        g.bench_with_input(BenchmarkId::new("threads", n), &n, |b, _| {
            b.iter(|| pool.install(|| module.hecke_operators(&primes).unwrap()))
        });
    }
    g.finish();
}

fn charpolys(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m: Vec<Vec<i64>> = (0..48).map(|_| (0..48).map(|_| rng.gen_range(-50..=50)).collect()).collect();
    let mut g = c.benchmark_group("charpoly_48");
    g.sample_size(10);
    for (n, pool) in pools() {
        g.bench_with_input(BenchmarkId::new("threads", n), &n, |b, _| b.iter(|| pool.install(|| charpoly(&m).unwrap())));
    }
    g.finish();
}

fn golden_levels(c: &mut Criterion) {
    let cfg = FieldConfig::icosian().unwrap();
    let mut g = c.benchmark_group("icosian_norms_to_31");
    g.sample_size(10);
    for (n, pool) in pools() {
        g.bench_with_input(BenchmarkId::new("threads", n), &n, |b, _| {
            b.iter(|| {
                pool.install(|| {
                    let pipe = Pipeline::new(&cfg, 31);
                    pipe.run_range(1, 31).unwrap()
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, hecke, charpolys, golden_levels);
criterion_main!(benches);

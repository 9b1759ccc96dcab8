use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use sumset_bench::{geometric, parabola_system, random_convex, squares};
use sumset_core::rep::rep_function_with;
use sumset_core::{count_incidences, energy_k, Backend, RepKind};

fn rep_backends(c: &mut Criterion) {
    let mut g = c.benchmark_group("difference_rep");
    for n in [128usize, 512, 2048] {
        let a = random_convex(n, 1);
        for (name, backend) in [("dense", Backend::Dense), ("sparse", Backend::Sparse)] {
            g.bench_with_input(BenchmarkId::new(name, n), &a, |bch, a| {
                bch.iter(|| {
                    rep_function_with(black_box(a), a, RepKind::Difference, backend).unwrap()
                })
            });
        }
    }
    g.finish();
}

fn sumsets(c: &mut Criterion) {
    let mut g = c.benchmark_group("sumset");
    for n in [256usize, 1024] {
        let a = squares(n);
        g.bench_with_input(BenchmarkId::new("squares", n), &a, |bch, a| {
            bch.iter(|| black_box(a).sumset(a).len())
        });
    }
    let q = geometric(128);
    g.bench_function("gp(3/2)/128", |bch| {
        bch.iter(|| black_box(&q).sumset(&q).len())
    });
    g.finish();
}

fn energies(c: &mut Criterion) {
    let a = squares(1024);
    c.bench_function("E3/squares/1024", |bch| {
        bch.iter(|| energy_k(black_box(&a), 3))
    });
}

fn incidences(c: &mut Criterion) {
    let mut g = c.benchmark_group("incidence_tally");
    for n in [16i64, 48] {
        g.bench_function(BenchmarkId::from_parameter(n), |bch| {
            bch.iter(|| count_incidences(&parabola_system(black_box(n))))
        });
    }
    g.finish();
}

criterion_group!(benches, rep_backends, sumsets, energies, incidences);
criterion_main!(benches);

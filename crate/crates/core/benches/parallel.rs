//! Pooled vs single-threaded runs of the data-parallel kernels.
//!
//! With the default `parallel` feature each kernel runs twice: on a
//! one-thread rayon pool and on the global pool. Built with
//! `--no-default-features` only the sequential path exists.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use bochner_core::bochner::{antiholo_4frame_defect, DEFAULT_SAMPLES};
use bochner_core::charts::{identities_at, make_chart, Chart, FdConfig, ModelSpec};
use bochner_core::scenario::{run_all, ScenarioInput};
use bochner_core::Tolerances;

fn variants() -> Vec<(&'static str, Option<usize>)> {
    #[cfg(feature = "parallel")]
    {
        vec![("one_thread", Some(1)), ("pool", None)]
    }
    #[cfg(not(feature = "parallel"))]
    {
        vec![("sequential", None)]
    }
}

fn on_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap();
        return pool.install(f);
    }
    let _ = threads;
    f()
}

fn antiholo(c: &mut Criterion) {
    let (p, r) = "cd(2,-1)*s6(1)"
        .parse::<ModelSpec>()
        .unwrap()
        .algebraic()
        .unwrap();
    let mut group = c.benchmark_group("antiholo_4frames");
    for (name, threads) in variants() {
        group.bench_function(BenchmarkId::new(name, DEFAULT_SAMPLES), |b| {
            b.iter(|| {
                on_threads(threads, || {
                    antiholo_4frame_defect(&p, &r, black_box(DEFAULT_SAMPLES), 7).unwrap()
                })
            })
        });
    }
    group.finish();
}

fn chart_points(c: &mut Criterion) {
    let chart = make_chart(&ModelSpec::Sphere6 { c: 1.0 }).unwrap();
    let xs = chart.sample_points(7, 8);
    let cfg = FdConfig::default();
    let mut group = c.benchmark_group("s6_identities");
    group.sample_size(10);
    for (name, threads) in variants() {
        group.bench_function(BenchmarkId::new(name, xs.len()), |b| {
            b.iter(|| {
                on_threads(threads, || {
                    bochner_core::exec::try_map(&xs, |x| identities_at(&chart, x, &cfg)).unwrap()
                })
            })
        });
    }
    group.finish();
}

fn scenarios(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("all_scenarios");
    group.sample_size(10);
    for (name, threads) in variants() {
        group.bench_function(name, |b| {
            b.iter(|| {
                on_threads(threads, || {
                    run_all(&ScenarioInput::default(), &tol).unwrap()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, antiholo, chart_points, scenarios);
criterion_main!(benches);

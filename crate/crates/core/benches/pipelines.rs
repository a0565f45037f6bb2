use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hh_core::bar::build_bar;
use hh_core::cdg::{build_mf_algebra, AlgebraPresentation};
use hh_core::graded::TruncationParams;
use hh_core::hochschild::gerstenhaber::check_gerstenhaber;
use hh_core::hochschild::{compute_hh, CochainKind, HhOptions};
use hh_core::poly::Poly;

fn mf(f: &str, vars: &[&str], d: i64) -> AlgebraPresentation {
    let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    build_mf_algebra(&Poly::parse(f, &names).unwrap(), &names, d).unwrap()
}

fn hh(a: &AlgebraPresentation, kind: CochainKind) -> Vec<usize> {
    let opts = HhOptions {
        cochains: Some(kind),
        representatives: false,
    };
    compute_hh(a, &[0, 1], &[TruncationParams::default()], &opts).unwrap().dims()
}

#[cfg(feature = "parallel")]
type Pool = Option<rayon::ThreadPool>;
#[cfg(not(feature = "parallel"))]
type Pool = Option<()>;

/// The global pool, a one-thread pool, or the plain loops of a build
/// without the `parallel` feature.
#[cfg(feature = "parallel")]
fn modes() -> Vec<(&'static str, Pool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    vec![("parallel", None), ("parallel_one_thread", Some(one))]
}

#[cfg(not(feature = "parallel"))]
fn modes() -> Vec<(&'static str, Pool)> {
    vec![("sequential", None)]
}

#[cfg(feature = "parallel")]
fn in_mode<R: Send>(pool: &Pool, f: impl FnOnce() -> R + Send) -> R {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn in_mode<R: Send>(_: &Pool, f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn bench(c: &mut Criterion) {
    let cusp = mf("x^3", &["x"], 4);
    let a2 = mf("x^2 + y^3", &["x", "y"], 5);
    let e6 = mf("x^3 + y^3", &["x", "y"], 7);
    let mut g = c.benchmark_group("pipelines");
    g.sample_size(10);
    for (mode, pool) in modes() {
        g.bench_function(BenchmarkId::new("bar_relations", mode), |b| {
            b.iter(|| {
                in_mode(&pool, || {
                    let bar = build_bar(&cusp, true, 4).unwrap();
                    bar.check_relations().len()
                })
            })
        });
        g.bench_function(BenchmarkId::new("window_hh_a2", mode), |b| {
            b.iter(|| in_mode(&pool, || hh(&a2, CochainKind::Window)))
        });
        g.bench_function(BenchmarkId::new("koszul_hh_e6", mode), |b| {
            b.iter(|| in_mode(&pool, || hh(&e6, CochainKind::Koszul)))
        });
        g.bench_function(BenchmarkId::new("gerstenhaber_50", mode), |b| {
            b.iter(|| in_mode(&pool, || check_gerstenhaber(&cusp, 50, 7).len()))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);

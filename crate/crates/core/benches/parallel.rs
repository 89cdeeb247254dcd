use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use monounion::fixtures::{get_fixture, search_fixtures, SearchParams};
use monounion::growth::{enumerate_balls, DEFAULT_FRONTIER_CAP};
use monounion::validate::check_associativity;
use monounion::{Engine, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn balls(c: &mut Criterion) {
    let spec = get_fixture("cascade3").unwrap().spec;
    let mut group = c.benchmark_group("enumerate_balls/cascade3/m=200");
    for (label, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| {
                let engine = Engine::new(spec.clone());
                black_box(enumerate_balls(&engine, 200, DEFAULT_FRONTIER_CAP, exec).unwrap())
            })
        });
    }
    group.finish();
}

fn associativity(c: &mut Criterion) {
    let spec = get_fixture("cascade3").unwrap().spec;
    let mut group = c.benchmark_group("check_associativity/cascade3/window=16");
    for (label, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| black_box(check_associativity(&Engine::new(spec.clone()), 16, exec)))
        });
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let params = SearchParams {
        max_result_exp: 3,
        ..SearchParams::default()
    };
    let mut group = c.benchmark_group("search_fixtures/n=2/max_exp=3");
    group.sample_size(10);
    for (label, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| black_box(search_fixtures(&params, exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, balls, associativity, search);
criterion_main!(benches);

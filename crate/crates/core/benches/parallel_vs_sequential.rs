use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use liberatrix::catalog::catalog;
use liberatrix::graph::EdgeSet;
use liberatrix::liberation::{enumerate_minimal_liberation_sets, is_graph_liberation_set};
use liberatrix::par;
use liberatrix::reproduce::reproduce;
use liberatrix::reproduce::worked::g151_member;
use liberatrix::strong::Kind;
use liberatrix::zeroforcing::{zero_forcing_number, DEFAULT_BOUND};

use num::BigRational;

const MODES: [(&str, bool); 2] = [("sequential", false), ("parallel", true)];

fn zero_forcing(c: &mut Criterion) {
    let mut group = c.benchmark_group("zero_forcing_number");
    for name in ["P3xP4", "C3xC3"] {
        let g = catalog(name).unwrap();
        for (mode, on) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), &g, |b, g| {
                par::set_parallel(on);
                b.iter(|| zero_forcing_number(g, DEFAULT_BOUND).unwrap().value)
            });
        }
    }
    group.finish();
}

fn liberation_sets(c: &mut Criterion) {
    let g = catalog("G151-base").unwrap();
    let third = BigRational::new(1.into(), 3.into());
    let a = g151_member(&third, &(-third.clone()), &BigRational::from_integer(2.into()));
    let beta = EdgeSet::parse(6, "1-5,1-6").unwrap();
    let mut group = c.benchmark_group("liberation_sets");
    group.sample_size(20);
    for (mode, on) in MODES {
        group.bench_function(BenchmarkId::new(mode, "enumerate G151 up to 2"), |b| {
            par::set_parallel(on);
            b.iter(|| enumerate_minimal_liberation_sets(&a, &g, Kind::Ssp, 2).unwrap().len())
        });
        group.bench_function(BenchmarkId::new(mode, "graph-level G151"), |b| {
            par::set_parallel(on);
            b.iter(|| is_graph_liberation_set(&g, &beta, Kind::Ssp, 20, 1).unwrap().is_yes())
        });
    }
    group.finish();
}

fn table(c: &mut Criterion) {
    let mut group = c.benchmark_group("table6");
    group.sample_size(10);
    for (mode, on) in MODES {
        group.bench_function(mode, |b| {
            par::set_parallel(on);
            b.iter(|| reproduce("table6", 0).unwrap().verdict)
        });
    }
    group.finish();
}

criterion_group!(benches, zero_forcing, liberation_sets, table);
criterion_main!(benches);

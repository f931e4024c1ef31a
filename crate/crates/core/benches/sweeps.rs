//! Sequential versus parallel execution of the main workloads.
//!
//! Both modes run in one binary: `exec::scoped` selects the mode per
//! iteration. Built without the `parallel` feature, the parallel rows fall
//! back to the sequential path and should match it.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cgt_core::adaptive::{random_oracles, verify_transcript, StrategyKind};
use cgt_core::exec::{self, Exec};
use cgt_core::generators::{EnumBudget, SweepSpec};
use cgt_core::hypergraph::{berge_girth, construct_girth_hypergraph, model3_construction};
use cgt_core::models::{solves_model3_semantic, Model};
use cgt_core::sweep::{run_sweep, Theorem};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn theorem_sweeps(c: &mut Criterion) {
    let n4 = SweepSpec::exhaustive(vec![4], 4, vec![]).families(EnumBudget::default()).unwrap();
    let random6 = SweepSpec::random(vec![6], 6, vec![], 2_000, 1).families(EnumBudget::default()).unwrap();
    let mut group = c.benchmark_group("sweep");
    for (label, mode) in MODES {
        group.bench_with_input(BenchmarkId::new("model1d/n=4", label), &n4, |b, fams| {
            b.iter(|| exec::scoped(mode, || run_sweep(Theorem::Model1d, black_box(fams), &[2]).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("model2dbl/random-n=6", label), &random6, |b, fams| {
            b.iter(|| exec::scoped(mode, || run_sweep(Theorem::Model2Dbl, black_box(fams), &[2]).unwrap()))
        });
    }
    group.finish();
}

fn hypergraphs(c: &mut Criterion) {
    let family = model3_construction(40, 2, 0).unwrap();
    let big = construct_girth_hypergraph(120, 3, 3, 5, 0, 64).unwrap();
    let mut group = c.benchmark_group("hypergraph");
    group.measurement_time(Duration::from_secs(10));
    for (label, mode) in MODES {
        group.bench_with_input(BenchmarkId::new("model3-semantic/n=40", label), &family, |b, f| {
            b.iter(|| exec::scoped(mode, || solves_model3_semantic(black_box(f), 2).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("berge-girth/n=120", label), &big, |b, h| {
            b.iter(|| exec::scoped(mode, || berge_girth(black_box(h)).unwrap()))
        });
        group.bench_function(BenchmarkId::new("construct/n=60-r=3-d=3", label), |b| {
            b.iter(|| exec::scoped(mode, || construct_girth_hypergraph(60, 3, 3, 5, black_box(5), 64).unwrap()))
        });
    }
    group.finish();
}

fn sessions(c: &mut Criterion) {
    let (n, d) = (200, 2);
    let oracles = random_oracles(n, d, 64, 3);
    let mut group = c.benchmark_group("sessions");
    for (label, mode) in MODES {
        group.bench_with_input(BenchmarkId::new("halving+verify/n=200-d=2", label), &oracles, |b, oracles| {
            b.iter(|| {
                exec::scoped(mode, || {
                    let transcripts = StrategyKind::HalvingModel3.simulate(n, d, None, black_box(oracles));
                    exec::map(&transcripts, |t| {
                        t.as_ref().map(|t| verify_transcript(t, Model::Model3).unwrap().solves).unwrap_or(false)
                    })
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, theorem_sweeps, hypergraphs, sessions);
criterion_main!(benches);

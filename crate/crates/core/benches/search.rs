//! Sequential versus data-parallel execution of the multistart searches.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use posmap::choi::extract_blocks;
use posmap::cpdecomp::{witness_search, WitnessOptions};
use posmap::positivity::{block_positive_2x2, positivity_prop11, prop12_matrix, SearchBudget};
use posmap::suite::{run_criterion, SuiteOptions};
use posmap::tang::{build_pipeline, tang_choi, TangParams};
use posmap::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn prop11(c: &mut Criterion) {
    let pl = build_pipeline(&TangParams::new(0.9, 0.12).unwrap()).unwrap();
    let blocks = extract_blocks(&pl.hfinal).unwrap();
    let mut group = c.benchmark_group("prop11");
    group.sample_size(10);
    for (name, e) in MODES {
        let budget = SearchBudget { restarts: 16, ..SearchBudget::default() }.with_execution(e);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| positivity_prop11(black_box(&blocks), &budget).unwrap())
        });
    }
    group.finish();
}

fn sphere(c: &mut Criterion) {
    let pl = build_pipeline(&TangParams::new(0.3, 0.01).unwrap()).unwrap();
    let (p, s, q) = prop12_matrix(&extract_blocks(&pl.hfinal).unwrap()).unwrap();
    let mut group = c.benchmark_group("block_positive_2x2");
    group.sample_size(10);
    for (name, e) in MODES {
        let budget = SearchBudget { restarts: 16, ..SearchBudget::default() }.with_execution(e);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| block_positive_2x2(black_box(&p), &s, &q, &budget).unwrap())
        });
    }
    group.finish();
}

fn witness(c: &mut Criterion) {
    let h = tang_choi(&TangParams::new(0.9, 0.12).unwrap());
    let mut group = c.benchmark_group("witness_search");
    group.sample_size(10);
    for (name, e) in MODES {
        let options = WitnessOptions { restarts: 8, execution: e, ..WitnessOptions::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| witness_search(black_box(&h), &options).unwrap())
        });
    }
    group.finish();
}

fn battery(c: &mut Criterion) {
    let mut group = c.benchmark_group("decomposable_battery");
    group.sample_size(10);
    for (name, e) in MODES {
        let options = SuiteOptions { execution: e, ..SuiteOptions::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| assert!(run_criterion(9, black_box(&options)).passed))
        });
    }
    group.finish();
}

criterion_group!(benches, prop11, sphere, witness, battery);
criterion_main!(benches);

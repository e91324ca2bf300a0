//! Parallel and sequential execution must agree bit for bit.

use posmap::choi::extract_blocks;
use posmap::cpdecomp::{witness_search, WitnessOptions};
use posmap::extremal::equality_case_fixture;
use posmap::positivity::{block_positive_2x2, prop12_matrix, positivity_prop11, SearchBudget};
use posmap::report::{classify, ClassifyOptions};
use posmap::tang::{build_pipeline, tang_choi, TangParams};
use posmap::{io, Execution};

fn both<T>(f: impl Fn(Execution) -> T) -> (T, T) {
    (f(Execution::Sequential), f(Execution::Parallel))
}

#[test]
fn prop11_search_is_execution_independent() {
    let pl = build_pipeline(&TangParams::new(0.9, 0.12).unwrap()).unwrap();
    let blocks = extract_blocks(&pl.hfinal).unwrap();
    let budget = SearchBudget { restarts: 8, ..SearchBudget::default() };
    let (s, p) = both(|e| positivity_prop11(&blocks, &budget.with_execution(e)).unwrap());
    assert_eq!(s, p);
    assert!(s.is_certified());
}

#[test]
fn sphere_search_is_execution_independent() {
    let pl = build_pipeline(&TangParams::new(0.3, 0.01).unwrap()).unwrap();
    let (pm, sm, qm) = prop12_matrix(&extract_blocks(&pl.hfinal).unwrap()).unwrap();
    let budget = SearchBudget { restarts: 8, ..SearchBudget::default() };
    let (s, p) = both(|e| block_positive_2x2(&pm, &sm, &qm, &budget.with_execution(e)).unwrap());
    assert_eq!(s, p);
}

#[test]
fn witness_search_is_execution_independent() {
    let h = tang_choi(&TangParams::new(0.9, 0.12).unwrap());
    let options = WitnessOptions { restarts: 4, iterations: 60, ..WitnessOptions::default() };
    let (s, p) = both(|e| witness_search(&h, &WitnessOptions { execution: e, ..options }).unwrap());
    assert_eq!(s, p);
}

#[test]
fn classification_is_deterministic_and_execution_independent() {
    let fx = equality_case_fixture(2, 9, 3, &SearchBudget::default()).unwrap();
    let h = posmap::choi::ChoiMatrix::new(fx.blocks.assemble_matrix().unwrap()).unwrap();
    let run = |e: Execution| {
        let mut o = ClassifyOptions::with_seed(11);
        o.budget.restarts = 8;
        o.budget.execution = e;
        o.witness.restarts = 2;
        o.witness.execution = e;
        o.decompose.max_iters = 2_000;
        classify(&h, &o).unwrap().without_timings()
    };
    let (s, p) = both(run);
    assert_eq!(s, p);
    assert_eq!(s, run(Execution::Sequential));
    assert_eq!(s.input_digest, io::input_digest(h.matrix()));
    assert!(s.equality_case);
}

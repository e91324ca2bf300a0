//! The reproduction battery: every structural claim checked numerically on
//! the Tang family, random batteries and the equality-case fixtures, one
//! pass/fail line per criterion.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::choi::{choi_from_map, extract_blocks, row_abs, row_abs_product, ChoiBlocks, ChoiMatrix, RowVector};
use crate::cpdecomp::{
    ccp_check, cp_check, decompose, kadison_constraints, witness_search, DecomposeOptions, DecompositionOutcome,
    WitnessOptions,
};
use crate::error::{Error, Result};
use crate::extremal::{
    canonicalize, compress, equality_case_fixture, prop13_check, prop14_check, prop14_fixture, Prop14Verdict,
};
use crate::io;
use crate::matkernel::{min_eigenvalue, partial_transpose, psd_check, psd_sqrt, ComplexMatrix, C64};
use crate::par::{self, Execution};
use crate::positivity::{
    block_positive_2x2, block_positive_equiv_form, positivity_prop11, thm7_inequality, SearchBudget, VerdictStatus,
};
use crate::report::{classify, ClassifyOptions, Decomposable};
use crate::rng::{self, DEFAULT_SEED};
use crate::tang::{build_pipeline, phi0_apply, tang_choi, y_variant, zero_pattern_violation, TangParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2}. {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
    /// Expectations that were not met, or the error that stopped the run.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub grid: usize,
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub fixtures: Vec<FixtureResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed) && self.fixtures.iter().all(|f| f.passed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    /// Side of the `(mu, eps)` grid.
    pub grid: usize,
    pub seed: u64,
    pub execution: Execution,
    /// Directory of fixture files to classify against their expectations.
    pub fixtures: Option<PathBuf>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { grid: 3, seed: DEFAULT_SEED, execution: Execution::Parallel, fixtures: None }
    }
}

impl SuiteOptions {
    fn budget(&self) -> SearchBudget {
        SearchBudget::default().with_seed(self.seed).with_execution(self.execution)
    }
}

pub const CRITERIA: [&str; 11] = [
    "Tang Choi matrix reproduction",
    "normalization pipeline",
    "positivity of Tang maps",
    "nondecomposability certificate",
    "strict operator inequality",
    "row-vector calculus",
    "block-positivity equivalence battery",
    "complete (co)positivity cross-validation",
    "decomposable round trip",
    "equality-case suite",
    "closed form of the Y entry",
];

type Outcome = Result<(bool, String)>;

fn run(id: usize, f: impl FnOnce() -> Outcome) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult { id, name: CRITERIA[id - 1].into(), passed, detail, seconds: start.elapsed().as_secs_f64() }
}

/// Runs one criterion by number (1-based).
pub fn run_criterion(id: usize, options: &SuiteOptions) -> CriterionResult {
    let o = options;
    match id {
        1 => run(1, criterion_tang_choi),
        2 => run(2, || criterion_pipeline(o)),
        3 => run(3, || criterion_tang_positivity(o)),
        4 => run(4, || criterion_witness(o)),
        5 => run(5, || criterion_thm7(o)),
        6 => run(6, || criterion_row_calculus(o)),
        7 => run(7, || criterion_equiv_battery(o)),
        8 => run(8, || criterion_cp_cross(o)),
        9 => run(9, || criterion_decomposable(o)),
        10 => run(10, || criterion_equality(o)),
        11 => run(11, || criterion_y_variant(o)),
        _ => CriterionResult {
            id,
            name: "unknown".into(),
            passed: false,
            detail: format!("no criterion {id}"),
            seconds: 0.0,
        },
    }
}

pub fn run_suite(options: &SuiteOptions) -> SuiteReport {
    let criteria = (1..=CRITERIA.len()).map(|id| run_criterion(id, options)).collect();
    let fixtures = match &options.fixtures {
        Some(dir) => check_fixture_dir(dir, options),
        None => Vec::new(),
    };
    SuiteReport { grid: options.grid, seed: options.seed, criteria, fixtures }
}

const REFERENCE_POINTS: [(f64, f64); 3] = [(0.9, 0.12), (0.5, 1.0 / 24.0), (0.3, 0.01)];

fn criterion_tang_choi() -> Outcome {
    let mut worst_time = 0.0f64;
    let mut worst_diff = 0.0f64;
    for (mu, eps) in REFERENCE_POINTS {
        let params = TangParams::new(mu, eps)?;
        let start = Instant::now();
        let h = tang_choi(&params);
        worst_time = worst_time.max(start.elapsed().as_secs_f64());
        let from_map = choi_from_map(
            |i, j| {
                let mut e = ComplexMatrix::zeros(2, 2);
                e[(i, j)] = C64::new(1.0, 0.0);
                phi0_apply(&params, &e).expect("2x2 input")
            },
            3,
        )?;
        worst_diff = worst_diff.max((h.matrix() - from_map.matrix()).max_abs());
    }
    let passed = worst_diff == 0.0 && worst_time < 1e-3;
    Ok((passed, format!("max entry difference {worst_diff:e}, slowest build {:.1} us", worst_time * 1e6)))
}

fn criterion_pipeline(o: &SuiteOptions) -> Outcome {
    let start = Instant::now();
    let mut worst = [0.0f64; 5];
    for params in TangParams::grid(o.grid) {
        let pl = build_pipeline(&params)?;
        let ident = (&pl.final_identity() - &ComplexMatrix::identity(4)).frobenius_norm();
        let vals = [ident, pl.w_unitarity_residual(), pl.abc_residual(), pl.w_identity_residual(), zero_pattern_violation(pl.hfinal.matrix())];
        for (w, v) in worst.iter_mut().zip(vals) {
            *w = w.max(v);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = worst[0] <= 1e-9
        && worst[1] <= 1e-10
        && worst[2] <= 1e-10
        && worst[3] <= 1e-10
        && worst[4] <= 1e-9
        && elapsed < 1.0;
    Ok((
        passed,
        format!(
            "{} points: ||phi(I) - I|| {:.1e}, W unitarity {:.1e}, abc {:.1e}, w {:.1e}, printed zeros {:.1e}, {elapsed:.3} s",
            o.grid * o.grid,
            worst[0],
            worst[1],
            worst[2],
            worst[3],
            worst[4]
        ),
    ))
}

fn criterion_tang_positivity(o: &SuiteOptions) -> Outcome {
    let budget = o.budget();
    let mut certified = 0;
    let mut min_margin = f64::INFINITY;
    let mut cp_false = 0;
    let mut ccp_false = 0;
    let grid = TangParams::grid(o.grid);
    for params in &grid {
        let pl = build_pipeline(params)?;
        let blocks = extract_blocks(&pl.hfinal)?;
        let v = positivity_prop11(&blocks, &budget)?;
        if v.is_certified() {
            certified += 1;
        }
        min_margin = min_margin.min(v.margin);
        cp_false += usize::from(!cp_check(&blocks)?.holds);
        ccp_false += usize::from(!ccp_check(&blocks)?.holds);
    }
    let reference = build_pipeline(&TangParams::new(0.9, 0.12)?)?;
    let h_min = min_eigenvalue(reference.hfinal.matrix())?;
    let pt_min = min_eigenvalue(reference.hfinal.partial_transpose().matrix())?;
    let n = grid.len();
    let passed = certified == n && cp_false == n && ccp_false == n && h_min < -1e-3 && pt_min < -1e-3;
    Ok((
        passed,
        format!(
            "certified {certified}/{n} (least margin {min_margin:.3e}), not CP {cp_false}/{n}, not coCP {ccp_false}/{n}; at (0.9, 0.12) min eig H {h_min:.4}, H^Γ {pt_min:.4}"
        ),
    ))
}

fn criterion_witness(o: &SuiteOptions) -> Outcome {
    let start = Instant::now();
    let h = tang_choi(&TangParams::new(0.9, 0.12)?);
    let witness = witness_search(&h, &WitnessOptions { seed: o.seed, execution: o.execution, ..WitnessOptions::default() })?;
    let decomposition = decompose(&h, &DecomposeOptions::default())?;
    let elapsed = start.elapsed().as_secs_f64();
    let Some(w) = witness.witness() else {
        return Ok((false, format!("no witness found ({witness:?})")));
    };
    let revalidated = w.validate(&h)?;
    let not_decomposed = matches!(decomposition, DecompositionOutcome::NotDecomposed { iterations: 20_000, .. });
    let exclusive = !(decomposition.certificate().is_some() && revalidated);
    let passed = w.value < -1e-6 && revalidated && w.is_valid_state() && not_decomposed && exclusive && elapsed < 60.0;
    let residual = match &decomposition {
        DecompositionOutcome::NotDecomposed { residual, .. } => *residual,
        DecompositionOutcome::Decomposed(c) => c.residual,
    };
    Ok((
        passed,
        format!(
            "Tr(H rho) = {:.6e}, min eig rho {:.1e}, rho^Γ {:.1e}, |tr - 1| {:.1e}; decomposition residual after 20000 iterations {residual:.3e}; {elapsed:.1} s",
            w.value,
            w.min_eig,
            w.min_eig_pt,
            (w.trace - 1.0).abs()
        ),
    ))
}

fn criterion_thm7(o: &SuiteOptions) -> Outcome {
    let mut least = f64::INFINITY;
    for params in TangParams::grid(o.grid) {
        let pl = build_pipeline(&params)?;
        least = least.min(thm7_inequality(&extract_blocks(&pl.hfinal)?)?.margin);
    }
    Ok((least > 1e-7, format!("least eigenvalue of U^(1/2) - |Y| - |Z| over the grid: {least:.6e}")))
}

fn random_row<R: Rng + ?Sized>(r: &mut R, n: usize) -> RowVector {
    RowVector((0..n).map(|_| rng::gaussian_complex(r)).collect())
}

fn criterion_row_calculus(o: &SuiteOptions) -> Outcome {
    let mut r = rng::stream(o.seed, "row-calculus", 0);
    let mut worst1 = 0.0f64;
    let mut worst2 = 0.0f64;
    for trial in 0..200 {
        let n = 1 + trial % 6;
        let x1 = random_row(&mut r, n);
        let x2 = random_row(&mut r, n);
        let abs1 = psd_sqrt(&x1.gram())?;
        let abs2 = psd_sqrt(&x2.gram())?;
        worst1 = worst1.max((&row_abs(&x1) - &abs1).frobenius_norm());
        let p = ComplexMatrix::projector(&x1.direction().expect("nonzero")).scale(x1.norm());
        worst1 = worst1.max((&row_abs(&x1) - &p).frobenius_norm());
        worst2 = worst2.max((&row_abs_product(&x1, &x2) - &(&abs1 * &abs2)).frobenius_norm());
    }
    let passed = worst1 <= 1e-11 && worst2 <= 1e-11;
    Ok((passed, format!("200 trials: |X| error {worst1:.1e}, |X1||X2| error {worst2:.1e}")))
}

fn random_triple<R: Rng + ?Sized>(r: &mut R, n: usize) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let p = rng::psd(r, n, n);
    let q = rng::psd(r, n, n);
    let scale = r.random_range(0.2..1.6) * (p.frobenius_norm() * q.frobenius_norm()).sqrt() / n as f64;
    let s = rng::ginibre(r, n, n).scale(scale / (2.0 * n as f64).sqrt());
    (p, s, q)
}

fn criterion_equiv_battery(o: &SuiteOptions) -> Outcome {
    let budget = SearchBudget { restarts: 16, ..o.budget() };
    let mut r = rng::stream(o.seed, "equivalence-battery", 0);
    let mut certified = 0;
    let mut violations = 0;
    let mut violation_failures = 0;
    let mut worst = f64::INFINITY;
    let mut attempts = 0;
    while certified < 50 && attempts < 2000 {
        attempts += 1;
        let n = 1 + attempts % 2;
        let (p, s, q) = random_triple(&mut r, n);
        let v = block_positive_2x2(&p, &s, &q, &budget)?;
        match v.status {
            VerdictStatus::Certified => {
                certified += 1;
                for _ in 0..100 {
                    let a: f64 = r.random_range(0.0..1.0);
                    let (pp, qq) = (a, 1.0 - a);
                    let s_abs = (pp * qq).sqrt() * r.random_range(0.0f64..1.0).sqrt();
                    let ss = C64::from_polar(s_abs, r.random_range(0.0..std::f64::consts::TAU));
                    let m = block_positive_equiv_form(&p, &s, &q, pp, qq, ss)?;
                    worst = worst.min(min_eigenvalue(&m)?);
                }
            }
            VerdictStatus::ViolationFound => {
                violations += 1;
                let w = v.witness.as_ref().expect("violation carries a witness");
                let [l1, l2] = w.lambda;
                let m = block_positive_equiv_form(&p, &s, &q, l1.norm_sqr(), l2.norm_sqr(), l1.conj() * l2)?;
                if min_eigenvalue(&m)? >= 0.0 {
                    violation_failures += 1;
                }
            }
            VerdictStatus::Inconclusive => {}
        }
    }
    let passed = certified == 50 && worst >= -1e-9 && violation_failures == 0 && violations > 0;
    Ok((
        passed,
        format!(
            "{certified} certified triples x 100 combinations: least eigenvalue {worst:.3e}; {violations} violating triples, {violation_failures} without a negative combination"
        ),
    ))
}

/// Random face-form Choi matrix; the kind cycles through CP, coCP and neither.
fn random_face_form<R: Rng + ?Sized>(r: &mut R, n: usize, kind: usize) -> Result<ChoiMatrix> {
    let d = n + 1;
    let mut g = rng::ginibre(r, 2 * d, 2 * d);
    for j in 0..2 * d {
        g[(d, j)] = C64::new(0.0, 0.0);
    }
    let psd = &g * &g.adjoint();
    let h = match kind % 4 {
        0 => psd,
        1 => partial_transpose(&psd, d)?,
        2 => {
            let mut h = psd;
            // Pushing the off-diagonal blocks breaks positivity of H.
            for i in 0..d {
                for j in d..2 * d {
                    if i != 0 || j != d {
                        let v = h[(i, j)] * 2.5;
                        h[(i, j)] = v;
                        h[(j, i)] = v.conj();
                    }
                }
            }
            h
        }
        _ => {
            let shift = ComplexMatrix::from_fn(2 * d, 2 * d, |i, j| {
                if i == j && i != d {
                    C64::new(r.random_range(-1.0..0.5), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            &psd + &shift
        }
    };
    ChoiMatrix::new(h)
}

fn criterion_cp_cross(o: &SuiteOptions) -> Outcome {
    let mut r = rng::stream(o.seed, "cp-cross", 0);
    let mut disagreements = 0;
    let (mut cp_count, mut ccp_count) = (0, 0);
    for k in 0..100 {
        let n = 1 + k % 3;
        let h = random_face_form(&mut r, n, k)?;
        let blocks = extract_blocks(&h)?;
        let cp = cp_check(&blocks)?;
        let ccp = ccp_check(&blocks)?;
        let tol = |m: &ComplexMatrix| crate::tol::SEARCH_TOL * m.frobenius_norm().max(1.0);
        let direct = psd_check(h.matrix(), tol(h.matrix()))?.is_psd();
        let pt = h.partial_transpose();
        let direct_pt = psd_check(pt.matrix(), tol(pt.matrix()))?.is_psd();
        disagreements += usize::from(cp.holds != direct) + usize::from(ccp.holds != direct_pt);
        cp_count += usize::from(cp.holds);
        ccp_count += usize::from(ccp.holds);
    }
    Ok((
        disagreements == 0,
        format!("100 matrices ({cp_count} CP, {ccp_count} coCP): {disagreements} disagreements"),
    ))
}

fn criterion_decomposable(o: &SuiteOptions) -> Outcome {
    let results = par::map_indexed(o.execution, 50, |k| -> Result<(f64, f64)> {
        let mut r = rng::stream(o.seed, "decomposable-battery", k as u64);
        let d = 2 + k % 3;
        let a = rng::psd(&mut r, 2 * d, 2 * d);
        let b = partial_transpose(&rng::psd(&mut r, 2 * d, 2 * d), d)?;
        let h = ChoiMatrix::new(&a + &b)?;
        match decompose(&h, &DecomposeOptions::default())? {
            DecompositionOutcome::Decomposed(cert) => {
                let kad = kadison_constraints(&h, &cert)?;
                Ok((cert.residual.max(cert.structural_residual), kad.min_margin()))
            }
            DecompositionOutcome::NotDecomposed { residual, .. } => Ok((residual, f64::NAN)),
        }
    });
    let results: Vec<(f64, f64)> = results.into_iter().collect::<Result<_>>()?;
    let failed = results.iter().filter(|(res, kad)| !(*res <= 1e-7 && *kad >= -1e-7)).count();
    let worst_res = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let worst_kad = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    Ok((
        failed == 0,
        format!("50 instances: {failed} failures, worst residual {worst_res:.2e}, least Kadison margin {worst_kad:.3e}"),
    ))
}

fn criterion_equality(o: &SuiteOptions) -> Outcome {
    let start = Instant::now();
    let budget = o.budget();
    let per = par::map_indexed(o.execution, 100, |k| -> Result<(bool, f64, f64, f64)> {
        let n = 2 + k % 3;
        let fx = equality_case_fixture(n, o.seed, k as u64, &budget.with_execution(Execution::Sequential))?;
        let dep = prop13_check(&fx.blocks);
        let canon = canonicalize(&fx.blocks)?;
        let c = &fx.canonical;
        let recovery = [
            (canon.y.norm() - c.y.norm()).abs(),
            (canon.z.norm() - c.z.norm()).abs(),
            (canon.u - c.u).abs(),
            (canon.t.norm() - c.t.norm()).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let mut r = rng::stream(o.seed, "equality-rho", k as u64);
        let mut margin = f64::INFINITY;
        for _ in 0..20 {
            let comp = compress(&canon, &rng::unit_vector(&mut r, n))?;
            margin = margin.min(comp.margin);
        }
        Ok((dep.dependent, dep.sigma2, recovery, margin))
    });
    let per: Vec<_> = per.into_iter().collect::<Result<_>>()?;
    let dependent = per.iter().filter(|p| p.0).count();
    let sigma2 = per.iter().map(|p| p.1).fold(0.0, f64::max);
    let recovery = per.iter().map(|p| p.2).fold(0.0, f64::max);
    let margin = per.iter().map(|p| p.3).fold(f64::INFINITY, f64::min);

    let mut prop14_ok = 0;
    for k in 0..10 {
        let variant = if k % 2 == 0 { Prop14Verdict::Cp } else { Prop14Verdict::Ccp };
        let rep = prop14_check(&prop14_fixture(2 + k % 3, variant, o.seed, k as u64)?)?;
        prop14_ok += usize::from(rep.verdict == variant && rep.confirmed);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = dependent == 100
        && sigma2 <= 1e-8
        && recovery <= 1e-8
        && margin >= -1e-9
        && prop14_ok == 10
        && elapsed < 30.0;
    Ok((
        passed,
        format!(
            "dependent {dependent}/100 (max sigma2 {sigma2:.1e}), recovery error {recovery:.1e}, least compression margin {margin:.3e}, CP/coCP dichotomy fixtures {prop14_ok}/10, {elapsed:.1} s"
        ),
    ))
}

fn criterion_y_variant(o: &SuiteOptions) -> Outcome {
    let grid = TangParams::grid(o.grid.max(3));
    let picks = [grid[0], grid[grid.len() / 2], grid[grid.len() - 1]];
    let mut rho = 0;
    let mut delta = 0;
    for params in picks {
        let v = y_variant(&build_pipeline(&params)?);
        rho += usize::from(v.matches_rho_form);
        delta += usize::from(v.matches_delta_form);
    }
    let consistent = (rho == 3 && delta == 0) || (delta == 3 && rho == 0);
    let which = if rho == 3 { "-1/(sqrt(3) rho)" } else if delta == 3 { "-1/(sqrt(3) delta)" } else { "neither" };
    Ok((consistent, format!("computed Y entry matches {which} at 3/3 points (rho form {rho}, delta form {delta})")))
}

/// Expected verdicts for a fixture; absent fields are not checked.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cp: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ccp: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposable: Option<Decomposable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality_case: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub matrix: ComplexMatrix,
    pub expect: Expectations,
}

fn blocks_fixture(name: &str, blocks: &ChoiBlocks, expect: Expectations) -> Result<Fixture> {
    Ok(Fixture { name: name.into(), matrix: blocks.assemble_matrix()?, expect })
}

/// The default fixture set written by the CLI.
pub fn default_fixtures(seed: u64) -> Result<Vec<Fixture>> {
    let params = TangParams::new(0.9, 0.12)?;
    let tang = build_pipeline(&params)?;
    let mut r = rng::stream(seed, "default-fixtures", 0);
    let nondecomposable = Expectations {
        positive: Some(true),
        cp: Some(false),
        ccp: Some(false),
        decomposable: Some(Decomposable::NoWitness),
        equality_case: Some(false),
    };
    let budget = SearchBudget::default().with_seed(seed);
    Ok(vec![
        Fixture { name: "tang-normalized".into(), matrix: tang.hfinal.matrix().clone(), expect: nondecomposable.clone() },
        Fixture {
            name: "tang-raw".into(),
            matrix: tang.h0.matrix().clone(),
            expect: Expectations { equality_case: None, ..nondecomposable },
        },
        Fixture {
            name: "random-psd".into(),
            matrix: rng::psd(&mut r, 6, 6),
            expect: Expectations {
                positive: Some(true),
                cp: Some(true),
                decomposable: Some(Decomposable::Yes),
                ..Expectations::default()
            },
        },
        Fixture {
            name: "negative-identity".into(),
            matrix: ComplexMatrix::identity(6).scale(-1.0),
            expect: Expectations {
                positive: Some(false),
                cp: Some(false),
                ccp: Some(false),
                decomposable: Some(Decomposable::NoWitness),
                ..Expectations::default()
            },
        },
        blocks_fixture(
            "equality-case",
            &equality_case_fixture(3, seed, 0, &budget)?.blocks,
            Expectations { positive: Some(true), equality_case: Some(true), ..Expectations::default() },
        )?,
        blocks_fixture(
            "equality-cp",
            &prop14_fixture(3, Prop14Verdict::Cp, seed, 0)?,
            Expectations {
                positive: Some(true),
                cp: Some(true),
                ccp: Some(false),
                decomposable: Some(Decomposable::Yes),
                equality_case: Some(true),
            },
        )?,
        blocks_fixture(
            "equality-ccp",
            &prop14_fixture(3, Prop14Verdict::Ccp, seed, 1)?,
            Expectations {
                positive: Some(true),
                cp: Some(false),
                ccp: Some(true),
                decomposable: Some(Decomposable::Yes),
                equality_case: Some(true),
            },
        )?,
    ])
}

pub fn write_fixtures(dir: &Path, fixtures: &[Fixture]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    fixtures
        .iter()
        .map(|f| {
            let path = dir.join(format!("{}.json", f.name));
            io::write_json(&path, f)?;
            Ok(path)
        })
        .collect()
}

/// Classifies one fixture and lists every unmet expectation.
pub fn check_fixture(fixture: &Fixture, options: &ClassifyOptions) -> FixtureResult {
    let mut failures = Vec::new();
    match ChoiMatrix::new(fixture.matrix.clone()).and_then(|h| classify(&h, options)) {
        Ok(rep) => {
            let e = &fixture.expect;
            let mut expect = |what: &str, wanted: Option<String>, got: String| {
                if let Some(w) = wanted {
                    if w != got {
                        failures.push(format!("{what}: expected {w}, got {got}"));
                    }
                }
            };
            let positive = match rep.flags.positive.status {
                VerdictStatus::Certified => "true",
                VerdictStatus::ViolationFound => "false",
                VerdictStatus::Inconclusive => "inconclusive",
            };
            expect("positive", e.positive.map(|b| b.to_string()), positive.into());
            expect("cp", e.cp.map(|b| b.to_string()), rep.flags.cp.to_string());
            expect("ccp", e.ccp.map(|b| b.to_string()), rep.flags.ccp.to_string());
            expect(
                "decomposable",
                e.decomposable.map(|d| format!("{d:?}")),
                format!("{:?}", rep.flags.decomposable),
            );
            expect("equality_case", e.equality_case.map(|b| b.to_string()), rep.equality_case.to_string());
        }
        Err(err) => failures.push(format!("error: {err}")),
    }
    FixtureResult { name: fixture.name.clone(), passed: failures.is_empty(), failures }
}

/// Checks every `*.json` fixture in `dir`; unreadable files count as failures.
pub fn check_fixture_dir(dir: &Path, options: &SuiteOptions) -> Vec<FixtureResult> {
    let classify_options = ClassifyOptions {
        budget: options.budget(),
        witness: WitnessOptions { seed: options.seed, execution: options.execution, ..WitnessOptions::default() },
        ..ClassifyOptions::with_seed(options.seed)
    };
    let mut paths: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect(),
        Err(e) => {
            return vec![FixtureResult {
                name: dir.display().to_string(),
                passed: false,
                failures: vec![format!("cannot read fixture directory: {e}")],
            }]
        }
    };
    paths.sort();
    if paths.is_empty() {
        return vec![FixtureResult {
            name: dir.display().to_string(),
            passed: false,
            failures: vec!["no fixture files".into()],
        }];
    }
    paths
        .iter()
        .map(|p| match io::read_json::<Fixture>(p) {
            Ok(f) => check_fixture(&f, &classify_options),
            Err(e) => FixtureResult { name: p.display().to_string(), passed: false, failures: vec![e.to_string()] },
        })
        .collect()
}

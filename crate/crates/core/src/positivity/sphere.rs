//! Block-positivity of `[[P, S], [S*, Q]]` on the unit sphere.
//!
//! The matrix is block-positive iff
//! `g(eta) = <eta,P eta><eta,Q eta> - |<eta,S eta>|^2 >= 0` for every unit `eta`.

use serde::{Deserialize, Serialize};

use super::{BlockPosVerdict, SearchBudget, Verdict, VerdictStatus};
use crate::error::{Error, Result};
use crate::matkernel::{self, min_eigenpair, psd_check, ComplexMatrix, C64, ZERO};
use crate::par::{self, argmin_by_key};
use crate::rng;

/// Grid step in radians for the deterministic sweep.
const GRID_STEP: f64 = 0.05;
/// Largest `n` for which the deterministic grid is run.
const GRID_MAX_DIM: usize = 3;

/// A point where the block form is evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockPosWitness {
    pub eta: Vec<C64>,
    /// Unit `lambda` in `C^2` minimizing `sum conj(l_i) l_j <eta, A_ij eta>` at `eta`.
    pub lambda: [C64; 2],
    /// `g(eta)`.
    pub value: f64,
    /// `sum conj(l_i) l_j <eta, A_ij eta>` at the witness.
    pub form_value: f64,
}

/// `g(eta)` for a unit vector `eta`.
pub fn block_positive_value(p: &ComplexMatrix, s: &ComplexMatrix, q: &ComplexMatrix, eta: &[C64]) -> f64 {
    let pe = p.quad_form_re(eta);
    let qe = q.quad_form_re(eta);
    let se = s.quad_form(eta);
    pe * qe - se.norm_sqr()
}

fn witness_at(p: &ComplexMatrix, s: &ComplexMatrix, q: &ComplexMatrix, eta: Vec<C64>) -> BlockPosWitness {
    let pe = p.quad_form_re(&eta);
    let qe = q.quad_form_re(&eta);
    let se = s.quad_form(&eta);
    let m = ComplexMatrix::from_vec(2, 2, vec![C64::new(pe, 0.0), se, se.conj(), C64::new(qe, 0.0)])
        .expect("2x2 data");
    let (form_value, v) = min_eigenpair(&m).expect("2x2 Hermitian");
    BlockPosWitness { value: pe * qe - se.norm_sqr(), lambda: [v[0], v[1]], form_value, eta }
}

/// Riemannian gradient descent with Armijo backtracking from `eta`.
fn descend(p: &ComplexMatrix, s: &ComplexMatrix, q: &ComplexMatrix, mut eta: Vec<C64>, iterations: usize) -> (Vec<C64>, f64) {
    let sa = s.adjoint();
    let mut f = block_positive_value(p, s, q, &eta);
    let mut step = 1.0;
    for _ in 0..iterations {
        let pv = p.mul_vec(&eta);
        let qv = q.mul_vec(&eta);
        let sv = s.mul_vec(&eta);
        let sav = sa.mul_vec(&eta);
        let pe = matkernel::inner(&eta, &pv).re;
        let qe = matkernel::inner(&eta, &qv).re;
        let sigma = matkernel::inner(&eta, &sv);
        let mut grad: Vec<C64> = (0..eta.len())
            .map(|k| (pv[k] * qe + qv[k] * pe - sv[k] * sigma.conj() - sav[k] * sigma) * 2.0)
            .collect();
        let radial = matkernel::inner(&eta, &grad).re;
        for (g, e) in grad.iter_mut().zip(&eta) {
            *g -= e * radial;
        }
        let gnorm2 = matkernel::norm_sqr(&grad);
        if gnorm2 < 1e-28 {
            break;
        }
        step *= 2.0;
        let mut accepted = false;
        while step > 1e-16 {
            let trial: Vec<C64> = eta.iter().zip(&grad).map(|(e, g)| e - g * step).collect();
            let trial = matkernel::normalized(&trial).unwrap_or_else(|| eta.clone());
            let ft = block_positive_value(p, s, q, &trial);
            if ft <= f - 1e-4 * step * gnorm2 {
                eta = trial;
                f = ft;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (eta, f)
}

/// Unit vector with a real nonnegative first entry from `n-1` polar angles in
/// `[0, pi/2]` and `n-1` phases.
fn hyperspherical(polar: &[f64], phases: &[f64], out: &mut [C64]) {
    let mut radius = 1.0;
    for k in 0..polar.len() {
        let amp = radius * polar[k].cos();
        out[k] = if k == 0 { C64::new(amp, 0.0) } else { C64::from_polar(amp, phases[k - 1]) };
        radius *= polar[k].sin();
    }
    let last = polar.len();
    out[last] = if last == 0 { C64::new(radius, 0.0) } else { C64::from_polar(radius, phases[last - 1]) };
}

fn grid_axis(upper: f64, include_upper: bool) -> Vec<f64> {
    let steps = (upper / GRID_STEP).ceil() as usize;
    let count = if include_upper { steps + 1 } else { steps };
    (0..count).map(|i| i as f64 * upper / steps as f64).collect()
}

/// Minimum of `g` over the deterministic grid; the global phase of `eta` is
/// fixed since `g` is phase invariant.
fn grid_minimum(p: &ComplexMatrix, s: &ComplexMatrix, q: &ComplexMatrix, budget: &SearchBudget) -> (Vec<C64>, f64, usize) {
    let n = p.rows();
    let polar_axis = grid_axis(std::f64::consts::FRAC_PI_2, true);
    let phase_axis = grid_axis(2.0 * std::f64::consts::PI, false);
    let dims = n - 1;
    // Outer index enumerates the first polar angle and first phase; the
    // remaining coordinates are swept inside each task.
    let outer: Vec<(f64, f64)> = match dims {
        0 => vec![(0.0, 0.0)],
        _ => polar_axis.iter().flat_map(|&a| phase_axis.iter().map(move |&b| (a, b))).collect(),
    };
    let results = par::map_indexed(budget.execution, outer.len(), |i| {
        let (a0, b0) = outer[i];
        let mut eta = vec![ZERO; n];
        let mut best = (f64::INFINITY, eta.clone());
        let mut count = 0usize;
        let mut consider = |polar: &[f64], phases: &[f64], eta: &mut Vec<C64>| {
            hyperspherical(polar, phases, eta);
            let v = block_positive_value(p, s, q, eta);
            count += 1;
            if v < best.0 {
                best = (v, eta.clone());
            }
        };
        match dims {
            0 => consider(&[], &[], &mut eta),
            1 => consider(&[a0], &[b0], &mut eta),
            2 => {
                for &a1 in &polar_axis {
                    for &b1 in &phase_axis {
                        consider(&[a0, a1], &[b0, b1], &mut eta);
                    }
                }
            }
            _ => unreachable!("grid only runs for n <= {GRID_MAX_DIM}"),
        }
        (best.0, best.1, count)
    });
    let evaluations = results.iter().map(|r| r.2).sum();
    let k = argmin_by_key(&results, |r| r.0).expect("non-empty grid");
    let (v, eta, _) = results[k].clone();
    (eta, v, evaluations)
}

/// Searches for a violation of block-positivity of `[[P, S], [S*, Q]]`.
///
/// Multistart gradient descent always runs; for `n <= 3` a 0.05 rad grid
/// over the sphere also runs and its best point seeds one more descent.
/// The verdict is `Certified` only when the grid ran and nothing fell below
/// the scaled tolerance.
pub fn block_positive_2x2(
    p: &ComplexMatrix,
    s: &ComplexMatrix,
    q: &ComplexMatrix,
    budget: &SearchBudget,
) -> Result<BlockPosVerdict> {
    let n = p.ensure_hermitian()?;
    if q.ensure_hermitian()? != n || s.rows() != n || s.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "P, S, Q must share one size; got {}x{}, {}x{}, {}x{}",
            p.rows(),
            p.cols(),
            s.rows(),
            s.cols(),
            q.rows(),
            q.cols()
        )));
    }
    let scale = (p.frobenius_norm() * q.frobenius_norm()).max(s.frobenius_norm().powi(2)).max(1.0);
    let psd_tol = budget.tol * p.frobenius_norm().max(q.frobenius_norm()).max(1.0);
    for (name, m) in [("P", p), ("Q", q)] {
        let verdict = psd_check(m, psd_tol)?;
        if !verdict.is_psd() {
            return Err(Error::NotPsd { what: name.into(), min_eigenvalue: verdict.min_eigenvalue() });
        }
    }
    let eff_tol = budget.tol * scale;

    let mut candidates: Vec<(Vec<C64>, f64)> = par::map_indexed(budget.execution, budget.restarts, |i| {
        let mut r = rng::stream(budget.seed, "block-positive", i as u64);
        let start = rng::unit_vector(&mut r, n);
        descend(p, s, q, start, budget.iterations)
    });
    let mut evaluations = budget.restarts * (budget.iterations + 1);
    let grid_ran = budget.grid && n <= GRID_MAX_DIM;
    if grid_ran {
        let (eta, v, count) = grid_minimum(p, s, q, budget);
        evaluations += count;
        candidates.push((eta.clone(), v));
        candidates.push(descend(p, s, q, eta, budget.iterations));
    }
    let k = argmin_by_key(&candidates, |c| c.1).expect("at least one candidate");
    let (eta, margin) = candidates.swap_remove(k);
    let status = if margin < -eff_tol {
        VerdictStatus::ViolationFound
    } else if grid_ran {
        VerdictStatus::Certified
    } else {
        VerdictStatus::Inconclusive
    };
    let witness = Some(witness_at(p, s, q, eta));
    Ok(Verdict { status, margin, witness, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::ONE;
    use crate::par::Execution;

    fn quick() -> SearchBudget {
        SearchBudget { restarts: 8, iterations: 200, ..SearchBudget::default() }
    }

    #[test]
    fn identity_pair_is_certified_with_unit_margin() {
        let i = ComplexMatrix::identity(2);
        let z = ComplexMatrix::zeros(2, 2);
        let v = block_positive_2x2(&i, &z, &i, &quick()).unwrap();
        assert_eq!(v.status, VerdictStatus::Certified);
        assert!((v.margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn off_diagonal_unit_violates() {
        let p = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let mut s = ComplexMatrix::zeros(2, 2);
        s[(0, 1)] = ONE;
        // g(c, s) = c^4 - c^2 s^2 is minimal at c^2 = 1/4 with value -1/8;
        // the balanced vector (1, 1)/sqrt(2) sits exactly on g = 0.
        let h = 0.5f64.sqrt();
        let balanced = [C64::new(h, 0.0), C64::new(h, 0.0)];
        assert!(block_positive_value(&p, &s, &p, &balanced).abs() < 1e-15);
        let probe = [C64::new(0.5, 0.0), C64::new(0.75f64.sqrt(), 0.0)];
        assert!((block_positive_value(&p, &s, &p, &probe) + 0.125).abs() < 1e-15);
        let v = block_positive_2x2(&p, &s, &p, &quick()).unwrap();
        assert!(v.is_violation());
        assert!((v.margin + 0.125).abs() < 1e-10);
        let w = v.witness.unwrap();
        assert!(block_positive_value(&p, &s, &p, &w.eta) < -1e-9);
        assert!(w.form_value < 0.0);
    }

    #[test]
    fn rejects_non_psd_diagonal_blocks() {
        let p = ComplexMatrix::from_diag(&[1.0, -1.0]);
        let i = ComplexMatrix::identity(2);
        assert!(matches!(block_positive_2x2(&p, &i, &i, &quick()), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn large_dimension_is_inconclusive_without_violation() {
        let i = ComplexMatrix::identity(5);
        let v = block_positive_2x2(&i, &ComplexMatrix::zeros(5, 5), &i, &quick()).unwrap();
        assert_eq!(v.status, VerdictStatus::Inconclusive);
    }

    #[test]
    fn sequential_matches_parallel() {
        let mut r = rng::stream(5, "sphere-test", 0);
        let p = rng::psd(&mut r, 2, 2);
        let q = rng::psd(&mut r, 2, 2);
        let s = rng::ginibre(&mut r, 2, 2);
        let a = block_positive_2x2(&p, &s, &q, &quick().with_execution(Execution::Sequential)).unwrap();
        let b = block_positive_2x2(&p, &s, &q, &quick().with_execution(Execution::Parallel)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hyperspherical_points_are_unit() {
        let mut out = vec![ZERO; 3];
        hyperspherical(&[0.3, 1.1], &[2.0, -0.7], &mut out);
        assert!((matkernel::norm(&out) - 1.0).abs() < 1e-15);
        assert_eq!(out[0].im, 0.0);
    }
}

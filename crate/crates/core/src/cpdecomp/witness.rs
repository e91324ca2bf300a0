//! PPT witness states: `rho >= 0`, `rho^Γ >= 0`, `Tr rho = 1` with
//! `Tr(H rho) < 0`, which rules out any decomposition of `H`.

use serde::{Deserialize, Serialize};

use crate::choi::ChoiMatrix;
use crate::error::Result;
use crate::matkernel::{min_eigenvalue, partial_transpose, psd_project, ComplexMatrix};
use crate::par::{self, argmin_by_key, Execution};
use crate::rng::{self, DEFAULT_SEED};
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub rho: ComplexMatrix,
    /// `Tr(H rho)`.
    pub value: f64,
    pub trace: f64,
    pub min_eig: f64,
    pub min_eig_pt: f64,
}

impl WitnessCertificate {
    /// Recomputes every field from `rho` and checks the state constraints.
    pub fn validate(&self, h: &ChoiMatrix) -> Result<bool> {
        let fresh = certify(h, self.rho.clone())?;
        Ok(fresh.is_valid_state() && fresh.value < -tol::WITNESS_TOL)
    }

    pub fn is_valid_state(&self) -> bool {
        (self.trace - 1.0).abs() <= tol::STATE_TRACE_TOL
            && self.min_eig >= -tol::STATE_EIG_TOL
            && self.min_eig_pt >= -tol::STATE_EIG_TOL
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Witness(WitnessCertificate),
    NoneFound { best_value: f64 },
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&WitnessCertificate> {
        match self {
            WitnessOutcome::Witness(w) => Some(w),
            WitnessOutcome::NoneFound { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessOptions {
    pub restarts: usize,
    pub iterations: usize,
    /// Dykstra sweeps per projection onto the PPT states.
    pub projection_sweeps: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self { restarts: 16, iterations: 150, projection_sweeps: 40, seed: DEFAULT_SEED, execution: Execution::Parallel }
    }
}

fn trace_re(m: &ComplexMatrix) -> f64 {
    m.trace().re
}

fn value(h: &ComplexMatrix, rho: &ComplexMatrix) -> f64 {
    h.frobenius_inner(rho).re
}

/// Approximate projection onto PPT states by Dykstra over the PSD cone, the
/// partially transposed PSD cone and the unit-trace hyperplane.
pub fn project_ppt(x: &ComplexMatrix, d: usize, sweeps: usize) -> Result<ComplexMatrix> {
    let size = x.rows();
    let mut cur = x.hermitian_part();
    let mut corr = [ComplexMatrix::zeros(size, size), ComplexMatrix::zeros(size, size)];
    for _ in 0..sweeps {
        let shifted = &cur + &corr[0];
        let next = psd_project(&shifted)?;
        corr[0] = &shifted - &next;
        cur = next;

        let shifted = &cur + &corr[1];
        let pt = partial_transpose(&shifted, d)?;
        let next = partial_transpose(&psd_project(&pt)?, d)?;
        corr[1] = &shifted - &next;
        cur = next;

        // The hyperplane is affine, so it needs no correction term.
        let shift = (1.0 - trace_re(&cur)) / size as f64;
        cur = &cur + &ComplexMatrix::identity(size).scale(shift);
    }
    Ok(cur)
}

/// Mixes with the maximally mixed state until both `rho` and `rho^Γ` are PSD,
/// then fixes the trace. Exact up to rounding.
fn repair(rho: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    let size = rho.rows();
    let mut r = rho.hermitian_part();
    let tr = trace_re(&r);
    if tr.abs() > 1e-300 {
        r = r.scale(1.0 / tr);
    }
    let deficit = -min_eigenvalue(&r)?.min(min_eigenvalue(&partial_transpose(&r, d)?)?).min(0.0);
    if deficit > 0.0 {
        let inv = 1.0 / size as f64;
        let lambda = deficit / (deficit + inv);
        r = &r.scale(1.0 - lambda) + &ComplexMatrix::identity(size).scale(lambda * inv);
    }
    let tr = trace_re(&r);
    Ok(r.scale(1.0 / tr))
}

fn certify(h: &ChoiMatrix, rho: ComplexMatrix) -> Result<WitnessCertificate> {
    let d = h.dim();
    Ok(WitnessCertificate {
        value: value(h.matrix(), &rho),
        trace: trace_re(&rho),
        min_eig: min_eigenvalue(&rho)?,
        min_eig_pt: min_eigenvalue(&partial_transpose(&rho, d)?)?,
        rho,
    })
}

fn descend(h: &ChoiMatrix, start: ComplexMatrix, options: &WitnessOptions) -> Result<ComplexMatrix> {
    let d = h.dim();
    let hm = h.matrix();
    let mut step = 1.0 / hm.frobenius_norm().max(1e-300);
    let mut rho = project_ppt(&start, d, options.projection_sweeps)?;
    let mut f = value(hm, &rho);
    for _ in 0..options.iterations {
        if step < 1e-8 / hm.frobenius_norm().max(1e-300) {
            break;
        }
        let trial = project_ppt(&(&rho - &hm.scale(step)), d, options.projection_sweeps)?;
        let ft = value(hm, &trial);
        if ft < f {
            rho = trial;
            f = ft;
        } else {
            step *= 0.5;
        }
    }
    Ok(rho)
}

/// Minimizes `Tr(H rho)` over PPT states by projected gradient steps from
/// random starting states. The best point is repaired into an exact PPT
/// state and re-validated before it is reported.
pub fn witness_search(h: &ChoiMatrix, options: &WitnessOptions) -> Result<WitnessOutcome> {
    let size = 2 * h.dim();
    let candidates = par::map_indexed(options.execution, options.restarts, |i| -> Result<WitnessCertificate> {
        let mut r = rng::stream(options.seed, "witness", i as u64);
        let g = rng::psd(&mut r, size, size);
        let start = g.scale(1.0 / trace_re(&g));
        let rho = descend(h, start, options)?;
        certify(h, repair(&rho, h.dim())?)
    });
    let candidates: Vec<WitnessCertificate> = candidates.into_iter().collect::<Result<_>>()?;
    let k = argmin_by_key(&candidates, |c| c.value).expect("at least one restart");
    let best = candidates.into_iter().nth(k).expect("index in range");
    if best.value < -tol::WITNESS_TOL && best.is_valid_state() {
        Ok(WitnessOutcome::Witness(best))
    } else {
        Ok(WitnessOutcome::NoneFound { best_value: best.value })
    }
}

/// `rho` as a certificate against `h`, with no search.
pub fn certify_state(h: &ChoiMatrix, rho: ComplexMatrix) -> Result<WitnessCertificate> {
    certify(h, rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> WitnessOptions {
        WitnessOptions { restarts: 4, iterations: 60, ..WitnessOptions::default() }
    }

    #[test]
    fn psd_matrix_has_no_witness() {
        let mut r = rng::stream(4, "witness-test", 0);
        let h = ChoiMatrix::new(rng::psd(&mut r, 6, 6)).unwrap();
        match witness_search(&h, &quick()).unwrap() {
            WitnessOutcome::NoneFound { best_value } => assert!(best_value >= -1e-8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn copositive_matrix_has_no_witness() {
        let mut r = rng::stream(4, "witness-test", 1);
        let h = ChoiMatrix::new(partial_transpose(&rng::psd(&mut r, 6, 6), 3).unwrap()).unwrap();
        assert!(witness_search(&h, &quick()).unwrap().witness().is_none());
    }

    #[test]
    fn repair_produces_exact_ppt_state() {
        let mut r = rng::stream(4, "witness-test", 2);
        let x = rng::hermitian(&mut r, 4);
        let rho = repair(&x, 2).unwrap();
        assert!((trace_re(&rho) - 1.0).abs() < 1e-12);
        assert!(min_eigenvalue(&rho).unwrap() >= -1e-12);
        assert!(min_eigenvalue(&partial_transpose(&rho, 2).unwrap()).unwrap() >= -1e-12);
    }

    #[test]
    fn projection_lands_near_ppt_states() {
        let mut r = rng::stream(4, "witness-test", 3);
        let x = rng::hermitian(&mut r, 6);
        let rho = project_ppt(&x, 3, 200).unwrap();
        assert!((trace_re(&rho) - 1.0).abs() < 1e-9);
        assert!(min_eigenvalue(&rho).unwrap() > -1e-4);
        assert!(min_eigenvalue(&partial_transpose(&rho, 3).unwrap()).unwrap() > -1e-4);
    }
}

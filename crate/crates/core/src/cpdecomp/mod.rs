//! Complete positivity, complete copositivity and decomposability.

mod dykstra;
mod kadison;
mod witness;

use serde::{Deserialize, Serialize};

use crate::choi::{ChoiBlocks, ChoiMatrix};
use crate::error::{Error, Result};
use crate::matkernel::{min_eigenvalue, psd_check, psd_inverse, ComplexMatrix, PsdVerdict};
use crate::positivity::Relation;
use crate::tol;

pub use dykstra::{certify_split, decompose, validate_certificate, DecomposeOptions, DecompositionCertificate, DecompositionOutcome};
pub use kadison::{kadison_constraints, KadisonReport};
pub use witness::{certify_state, project_ppt, witness_search, WitnessCertificate, WitnessOptions, WitnessOutcome};

/// PSD tolerance for Choi matrices, relative to their size.
fn psd_tol(m: &ComplexMatrix) -> f64 {
    tol::SEARCH_TOL * m.frobenius_norm().max(1.0)
}

/// Outcome of a complete (co)positivity test through the condensed matrix,
/// cross-checked against the full Choi matrix (or its partial transpose).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpReport {
    pub holds: bool,
    /// `||Z||` for the CP test, `||Y||` for the coCP test.
    pub vanishing_row_norm: f64,
    /// PSD verdict of the `(2n+1)`-square condensed matrix.
    pub condensed: PsdVerdict,
    /// PSD verdict of `H` (CP) or `H^Γ` (coCP).
    pub full: PsdVerdict,
    /// Both characterizations give the same answer.
    pub consistent: bool,
}

/// `H` with row and column `n+1` (the `f_1` slot of the second block) removed.
fn condense(h: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let keep: Vec<usize> = (0..2 * d).filter(|&k| k != d).collect();
    ComplexMatrix::from_fn(keep.len(), keep.len(), |i, j| h[(keep[i], keep[j])])
}

fn cp_like(full: &ComplexMatrix, d: usize, row_norm: f64) -> Result<CpReport> {
    let condensed_m = condense(full, d);
    let condensed = psd_check(&condensed_m, psd_tol(&condensed_m))?;
    let full_verdict = psd_check(full, psd_tol(full))?;
    let holds = row_norm <= tol::STRUCT_TOL && condensed.is_psd();
    Ok(CpReport {
        holds,
        vanishing_row_norm: row_norm,
        consistent: holds == full_verdict.is_psd(),
        condensed,
        full: full_verdict,
    })
}

/// Complete positivity: `Z = 0` and `[[a, C, Y], [C*, B, T], [Y*, T*, U]] >= 0`.
pub fn cp_check(blocks: &ChoiBlocks) -> Result<CpReport> {
    let h = blocks.assemble()?;
    cp_like(h.matrix(), h.dim(), blocks.z.norm())
}

/// Complete copositivity: `Y = 0` and `[[a, C, Z], [C*, B, T*], [Z*, T, U]] >= 0`.
pub fn ccp_check(blocks: &ChoiBlocks) -> Result<CpReport> {
    let h = blocks.assemble()?;
    let pt = h.partial_transpose();
    cp_like(pt.matrix(), h.dim(), blocks.y.norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prop9Variant {
    Cp,
    Ccp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop9Report {
    /// `T* B^{-1} T <= U` (CP) or `T B^{-1} T* <= U` (coCP); `None` when `B` is singular.
    pub schur: Option<Relation>,
    /// Why the first relation could not be evaluated.
    pub schur_error: Option<String>,
    /// `C* C <= a B`.
    pub c_bound: Relation,
    /// `Y* Y <= a U` (CP) or `Z* Z <= a U` (coCP).
    pub row_bound: Relation,
}

impl Prop9Report {
    pub fn all_hold(&self) -> bool {
        self.schur.as_ref().is_some_and(|r| r.holds) && self.c_bound.holds && self.row_bound.holds
    }
}

fn relation(name: &str, diff: &ComplexMatrix) -> Relation {
    let margin = min_eigenvalue(&diff.hermitian_part()).unwrap_or(f64::NAN);
    let slack = tol::SEARCH_TOL * diff.frobenius_norm().max(1.0);
    Relation { name: name.into(), holds: margin >= -slack, margin }
}

/// Consequences of the condensed matrix being PSD.
pub fn prop9_consequences(blocks: &ChoiBlocks, variant: Prop9Variant) -> Prop9Report {
    let (t_left, t_right, row, schur_name, row_name) = match variant {
        Prop9Variant::Cp => (blocks.t.adjoint(), blocks.t.clone(), &blocks.y, "T* B^-1 T <= U", "Y* Y <= a U"),
        Prop9Variant::Ccp => (blocks.t.clone(), blocks.t.adjoint(), &blocks.z, "T B^-1 T* <= U", "Z* Z <= a U"),
    };
    let (schur, schur_error) = match psd_inverse(&blocks.b.hermitian_part(), tol::RANK_TOL) {
        Ok(binv) => {
            let diff = &blocks.u - &(&(&t_left * &binv) * &t_right);
            (Some(relation(schur_name, &diff)), None)
        }
        Err(Error::Singular { eigenvalue, .. }) => {
            (None, Some(Error::SingularB { min_eigenvalue: eigenvalue }.to_string()))
        }
        Err(e) => (None, Some(e.to_string())),
    };
    Prop9Report {
        schur,
        schur_error,
        c_bound: relation("C* C <= a B", &(&blocks.b.scale(blocks.a) - &blocks.c.gram())),
        row_bound: relation(row_name, &(&blocks.u.scale(blocks.a) - &row.gram())),
    }
}

/// Complete positivity of an arbitrary Choi matrix.
pub fn is_completely_positive(h: &ChoiMatrix) -> Result<PsdVerdict> {
    psd_check(h.matrix(), psd_tol(h.matrix()))
}

/// Complete copositivity of an arbitrary Choi matrix.
pub fn is_completely_copositive(h: &ChoiMatrix) -> Result<PsdVerdict> {
    let pt = h.partial_transpose();
    psd_check(pt.matrix(), psd_tol(pt.matrix()))
}

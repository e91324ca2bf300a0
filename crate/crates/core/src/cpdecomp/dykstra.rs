//! Decomposability `H = H1 + H2` with `H1 >= 0` and `H2^Γ >= 0`, found by
//! Dykstra's alternating projections.

use serde::{Deserialize, Serialize};

use crate::choi::ChoiMatrix;
use crate::error::{Error, Result};
use crate::matkernel::{min_eigenvalue, partial_transpose, psd_project, ComplexMatrix, ZERO};
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCertificate {
    /// Choi matrix of the completely positive part.
    pub h1: ComplexMatrix,
    /// Choi matrix of the completely copositive part.
    pub h2: ComplexMatrix,
    /// `||H1 + H2 - H||_F`.
    pub residual: f64,
    pub min_eig_h1: f64,
    pub min_eig_h2_pt: f64,
    /// Largest entry in a slot that the face form forces to zero (0 when
    /// `H` is not in face form).
    pub structural_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DecompositionOutcome {
    Decomposed(DecompositionCertificate),
    /// No decomposition found within the budget; not a proof of
    /// nondecomposability.
    NotDecomposed { iterations: usize, residual: f64, trace: Vec<(usize, f64)> },
}

impl DecompositionOutcome {
    pub fn certificate(&self) -> Option<&DecompositionCertificate> {
        match self {
            DecompositionOutcome::Decomposed(c) => Some(c),
            DecompositionOutcome::NotDecomposed { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeOptions {
    pub max_iters: usize,
    /// Residual at which iteration stops early.
    pub target: f64,
    /// Residual a certificate must meet.
    pub feas_tol: f64,
    /// Record the residual every this many iterations.
    pub trace_every: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self { max_iters: 20_000, target: 1e-10, feas_tol: tol::FEAS_TOL, trace_every: 500 }
    }
}

/// Entries forced to zero in `H1` and `H2` when `H` is in face form.
///
/// `H[N][N] = 0` (with `N = n+1`, 0-based index `d`) forces row and column
/// `d` of `H1` to vanish and row `d` of `H2^Γ`, i.e. `H2[0][d+b]`,
/// `H2[d][d+b]` and their Hermitian mirrors.
struct ZeroPattern {
    size: usize,
    h1: Vec<bool>,
    h2: Vec<bool>,
}

impl ZeroPattern {
    fn none(size: usize) -> Self {
        Self { size, h1: vec![false; size * size], h2: vec![false; size * size] }
    }

    fn face_form(d: usize) -> Self {
        let size = 2 * d;
        let mut z = Self::none(size);
        for k in 0..size {
            z.h1[d * size + k] = true;
            z.h1[k * size + d] = true;
        }
        for b in 0..d {
            for r in [0, d] {
                let c = d + b;
                z.h2[r * size + c] = true;
                z.h2[c * size + r] = true;
            }
        }
        z
    }

    fn for_matrix(h: &ChoiMatrix) -> Self {
        let d = h.dim();
        let m = h.matrix();
        let in_face = (0..d).all(|b| m[(d, d + b)].norm() <= tol::STRUCT_TOL) && m[(0, d)].norm() <= tol::STRUCT_TOL;
        if in_face {
            Self::face_form(d)
        } else {
            Self::none(2 * d)
        }
    }

    fn structural_residual(&self, h1: &ComplexMatrix, h2: &ComplexMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for idx in 0..self.size * self.size {
            let (r, c) = (idx / self.size, idx % self.size);
            if self.h1[idx] {
                worst = worst.max(h1[(r, c)].norm());
            }
            if self.h2[idx] {
                worst = worst.max(h2[(r, c)].norm());
            }
        }
        worst
    }
}

/// Projection onto `{H1 + H2 = H}` intersected with the zero pattern.
fn project_affine(h: &ComplexMatrix, pattern: &ZeroPattern, x1: &mut ComplexMatrix, x2: &mut ComplexMatrix) {
    let n = pattern.size;
    for r in 0..n {
        for c in 0..n {
            let idx = r * n + c;
            match (pattern.h1[idx], pattern.h2[idx]) {
                (true, true) => {
                    x1[(r, c)] = ZERO;
                    x2[(r, c)] = ZERO;
                }
                (true, false) => {
                    x1[(r, c)] = ZERO;
                    x2[(r, c)] = h[(r, c)];
                }
                (false, true) => {
                    x1[(r, c)] = h[(r, c)];
                    x2[(r, c)] = ZERO;
                }
                (false, false) => {
                    let half = (h[(r, c)] - x1[(r, c)] - x2[(r, c)]) * 0.5;
                    x1[(r, c)] += half;
                    x2[(r, c)] += half;
                }
            }
        }
    }
}

fn project_cones(x1: &ComplexMatrix, x2: &ComplexMatrix, d: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let y1 = psd_project(&x1.hermitian_part())?;
    let pt = partial_transpose(&x2.hermitian_part(), d)?;
    let y2 = partial_transpose(&psd_project(&pt)?, d)?;
    Ok((y1, y2))
}

fn affine_residual(h: &ComplexMatrix, pattern: &ZeroPattern, y1: &ComplexMatrix, y2: &ComplexMatrix) -> f64 {
    let sum = &(y1 + y2) - h;
    sum.frobenius_norm().max(pattern.structural_residual(y1, y2))
}

/// Looks for `H = H1 + H2` with `H1` PSD and `H2` PSD after partial
/// transpose. When `H` is in face form the structural zeros that any such
/// split must have are imposed in the affine step.
pub fn decompose(h: &ChoiMatrix, options: &DecomposeOptions) -> Result<DecompositionOutcome> {
    let d = h.dim();
    let target = h.matrix();
    let pattern = ZeroPattern::for_matrix(h);
    let mut x1 = target.clone();
    let mut x2 = ComplexMatrix::zeros(2 * d, 2 * d);
    project_affine(target, &pattern, &mut x1, &mut x2);
    let mut p1 = ComplexMatrix::zeros(2 * d, 2 * d);
    let mut p2 = ComplexMatrix::zeros(2 * d, 2 * d);
    let mut trace = Vec::new();
    let mut residual = f64::INFINITY;
    let mut best: Option<(f64, ComplexMatrix, ComplexMatrix)> = None;
    let mut iterations = 0;
    for iter in 1..=options.max_iters {
        iterations = iter;
        let (y1, y2) = project_cones(&(&x1 + &p1), &(&x2 + &p2), d)?;
        p1 = &(&x1 + &p1) - &y1;
        p2 = &(&x2 + &p2) - &y2;
        residual = affine_residual(target, &pattern, &y1, &y2);
        if best.as_ref().is_none_or(|b| residual < b.0) {
            best = Some((residual, y1.clone(), y2.clone()));
        }
        if iter % options.trace_every == 0 || iter == 1 {
            trace.push((iter, residual));
        }
        if residual <= options.target {
            break;
        }
        x1 = y1;
        x2 = y2;
        project_affine(target, &pattern, &mut x1, &mut x2);
    }
    let (best_residual, h1, h2) = best.expect("at least one iteration");
    if best_residual <= options.feas_tol {
        let cert = certificate_for(target, &pattern, h1, h2, d)?;
        if cert.residual.max(cert.structural_residual) <= options.feas_tol
            && cert.min_eig_h1 >= -options.feas_tol
            && cert.min_eig_h2_pt >= -options.feas_tol
        {
            return Ok(DecompositionOutcome::Decomposed(cert));
        }
    }
    Ok(DecompositionOutcome::NotDecomposed { iterations, residual: residual.min(best_residual), trace })
}

fn certificate_for(
    h: &ComplexMatrix,
    pattern: &ZeroPattern,
    h1: ComplexMatrix,
    h2: ComplexMatrix,
    d: usize,
) -> Result<DecompositionCertificate> {
    let residual = (&(&h1 + &h2) - h).frobenius_norm();
    let min_eig_h1 = min_eigenvalue(&h1)?;
    let min_eig_h2_pt = min_eigenvalue(&partial_transpose(&h2, d)?)?;
    let structural_residual = pattern.structural_residual(&h1, &h2);
    Ok(DecompositionCertificate { h1, h2, residual, min_eig_h1, min_eig_h2_pt, structural_residual })
}

/// Builds the certificate fields for a given split `H = H1 + H2`, without
/// judging them.
pub fn certify_split(h: &ChoiMatrix, h1: ComplexMatrix, h2: ComplexMatrix) -> Result<DecompositionCertificate> {
    certificate_for(h.matrix(), &ZeroPattern::for_matrix(h), h1, h2, h.dim())
}

/// Re-derives every claim of a certificate from the matrices alone.
pub fn validate_certificate(h: &ChoiMatrix, cert: &DecompositionCertificate, feas_tol: f64) -> Result<()> {
    let d = h.dim();
    let size = 2 * d;
    for (name, m) in [("H1", &cert.h1), ("H2", &cert.h2)] {
        if m.rows() != size || m.cols() != size {
            return Err(Error::InvalidCertificate(format!("{name} has shape {}x{}", m.rows(), m.cols())));
        }
        m.ensure_hermitian().map_err(|e| Error::InvalidCertificate(format!("{name}: {e}")))?;
    }
    let fresh = certificate_for(h.matrix(), &ZeroPattern::for_matrix(h), cert.h1.clone(), cert.h2.clone(), d)?;
    if fresh.residual > feas_tol {
        return Err(Error::InvalidCertificate(format!("||H1 + H2 - H|| = {:e}", fresh.residual)));
    }
    if fresh.min_eig_h1 < -feas_tol {
        return Err(Error::InvalidCertificate(format!("H1 has eigenvalue {:e}", fresh.min_eig_h1)));
    }
    if fresh.min_eig_h2_pt < -feas_tol {
        return Err(Error::InvalidCertificate(format!("H2^Γ has eigenvalue {:e}", fresh.min_eig_h2_pt)));
    }
    Ok(())
}

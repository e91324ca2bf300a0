//! Kadison–Schwarz type constraints satisfied by every decomposition.
//!
//! Writing `phi1(A) = V1* pi(A) V1` and `phi2(A) = V2* pi(A^T) V2` and
//! stacking `V = [V1; V2]` gives `phi(E_ij) = V* D V` with
//! `D = pi(E_ij) ⊕ pi(E_ji)`, hence
//!
//! ```text
//! phi(E_ij)* phi(E_ij) <= ||phi(I)|| (phi1(E_jj) + phi2(E_ii)).
//! ```
//!
//! The index order on the right is forced: for the transpose map (`phi1 = 0`,
//! `phi2 = phi`) and `(i, j) = (1, 2)` the left side is `E_22 = phi2(E_11)`,
//! while `phi2(E_22) = E_11` would fail.

use serde::{Deserialize, Serialize};

use super::dykstra::{validate_certificate, DecompositionCertificate};
use crate::choi::{extract_blocks, split_blocks_unchecked, ChoiMatrix};
use crate::error::{Error, Result};
use crate::matkernel::{eigh, min_eigenvalue, ComplexMatrix};
use crate::positivity::Relation;
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KadisonReport {
    /// `||phi(I)||`, the operator norm.
    pub norm_phi_identity: f64,
    /// `phi(E_ij)* phi(E_ij) <= ||phi(I)|| (phi1(E_jj) + phi2(E_ii))` for all four `(i, j)`.
    pub matrix_units: Vec<Relation>,
    /// The two block forms for face-form maps: `(i, j) = (1, 2)` and `(2, 1)`
    /// written in terms of `Y, Z, T` and the blocks of `H1`, `H2`.
    pub face_blocks: Vec<Relation>,
    /// The same inequalities with `phi1(E_ii) + phi2(E_jj)` on the right;
    /// informational only, since that ordering does not hold in general.
    pub swapped_order: Vec<Relation>,
}

impl KadisonReport {
    pub fn min_margin(&self) -> f64 {
        self.matrix_units.iter().chain(&self.face_blocks).map(|r| r.margin).fold(f64::INFINITY, f64::min)
    }

    pub fn all_hold(&self) -> bool {
        self.matrix_units.iter().chain(&self.face_blocks).all(|r| r.holds)
    }
}

fn block(m: &ComplexMatrix, d: usize, i: usize, j: usize) -> ComplexMatrix {
    m.submatrix(i * d, j * d, d, d)
}

fn relation(name: String, rhs: &ComplexMatrix, lhs: &ComplexMatrix) -> Result<Relation> {
    let diff = (rhs - lhs).hermitian_part();
    let margin = min_eigenvalue(&diff)?;
    let slack = tol::FEAS_TOL * diff.frobenius_norm().max(1.0);
    Ok(Relation { name, holds: margin >= -slack, margin })
}

/// Evaluates the constraints for a validated decomposition of `h`.
pub fn kadison_constraints(h: &ChoiMatrix, cert: &DecompositionCertificate) -> Result<KadisonReport> {
    validate_certificate(h, cert, tol::FEAS_TOL)?;
    let d = h.dim();
    let norm = eigh(&h.apply_identity())?.max_eigenvalue().max(0.0);
    let mut matrix_units = Vec::new();
    let mut swapped_order = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let x = h.block(i, j);
            let lhs = &x.adjoint() * &x;
            let rhs = (&block(&cert.h1, d, j, j) + &block(&cert.h2, d, i, i)).scale(norm);
            matrix_units.push(relation(format!("E{}{}", i + 1, j + 1), &rhs, &lhs)?);
            let swapped = (&block(&cert.h1, d, i, i) + &block(&cert.h2, d, j, j)).scale(norm);
            swapped_order.push(relation(format!("E{}{} swapped", i + 1, j + 1), &swapped, &lhs)?);
        }
    }
    let face_blocks = match extract_blocks(h) {
        Ok(b) => {
            let h1 = split_blocks_unchecked(&ChoiMatrix::new(cert.h1.clone())?);
            let h2 = split_blocks_unchecked(&ChoiMatrix::new(cert.h2.clone())?);
            // [[||Z||^2, Z T], [T* Z*, |Y|^2 + T* T]] <= ||phi(I)|| [[a2, C2], [C2*, B2 + U1]]
            let lhs12 = ComplexMatrix::from_blocks(&[
                vec![&ComplexMatrix::from_diag(&[b.z.norm().powi(2)]), &b.z.mul_matrix(&b.t).as_matrix()],
                vec![&b.z.mul_matrix(&b.t).as_matrix().adjoint(), &(&b.y.gram() + &(&b.t.adjoint() * &b.t))],
            ])?;
            let rhs12 = ComplexMatrix::from_blocks(&[
                vec![&ComplexMatrix::from_diag(&[h2.a]), &h2.c.as_matrix()],
                vec![&h2.c.as_matrix().adjoint(), &(&h2.b + &h1.u)],
            ])?
            .scale(norm);
            // [[||Y||^2, Y T*], [T Y*, |Z|^2 + T T*]] <= ||phi(I)|| [[a1, C1], [C1*, B1 + U2]]
            let ytstar = b.y.mul_matrix(&b.t.adjoint()).as_matrix();
            let lhs21 = ComplexMatrix::from_blocks(&[
                vec![&ComplexMatrix::from_diag(&[b.y.norm().powi(2)]), &ytstar],
                vec![&ytstar.adjoint(), &(&b.z.gram() + &(&b.t * &b.t.adjoint()))],
            ])?;
            let rhs21 = ComplexMatrix::from_blocks(&[
                vec![&ComplexMatrix::from_diag(&[h1.a]), &h1.c.as_matrix()],
                vec![&h1.c.as_matrix().adjoint(), &(&h1.b + &h2.u)],
            ])?
            .scale(norm);
            vec![relation("face block (1,2)".into(), &rhs12, &lhs12)?, relation("face block (2,1)".into(), &rhs21, &lhs21)?]
        }
        Err(Error::NotInFaceForm { .. }) => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok(KadisonReport { norm_phi_identity: norm, matrix_units, face_blocks, swapped_order })
}

//! Spectral matrix functions, PSD tests and the partial transpose.

use serde::{Deserialize, Serialize};

use super::eigen::{eigh, hermitian_eig};
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tol;

fn clamp_tol(m: &ComplexMatrix) -> f64 {
    tol::CLAMP_TOL * m.frobenius_norm().max(1.0)
}

/// Positive square root; eigenvalues within `clamp` of zero are set to zero,
/// so rank-deficient inputs keep their exact kernel instead of picking up
/// `sqrt(rounding)` sized noise.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(m)?;
    let lmin = eig.min_eigenvalue();
    let clamp = clamp_tol(m);
    if lmin < -clamp {
        return Err(Error::NotPsd { what: "matrix".into(), min_eigenvalue: lmin });
    }
    Ok(eig.reconstruct_with(|l| if l <= clamp { 0.0 } else { l.sqrt() }))
}

/// `M^{-1/2}` for positive definite `M`.
pub fn psd_inv_sqrt(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let eig = eigh(m)?;
    let lmin = eig.min_eigenvalue();
    if lmin <= rank_tol {
        return Err(Error::Singular { eigenvalue: lmin, rank_tol });
    }
    Ok(eig.reconstruct_with(|l| 1.0 / l.sqrt()))
}

/// `M^{-1}` for positive definite `M`.
pub fn psd_inverse(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let eig = eigh(m)?;
    let lmin = eig.min_eigenvalue();
    if lmin <= rank_tol {
        return Err(Error::Singular { eigenvalue: lmin, rank_tol });
    }
    Ok(eig.reconstruct_with(|l| 1.0 / l))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PsdVerdict {
    Psd { min_eigenvalue: f64 },
    /// `witness` is a unit vector with `<w, M w> = min_eigenvalue < -tol`.
    NotPsd { min_eigenvalue: f64, witness: Vec<C64> },
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::Psd { .. })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        match self {
            PsdVerdict::Psd { min_eigenvalue } | PsdVerdict::NotPsd { min_eigenvalue, .. } => *min_eigenvalue,
        }
    }
}

pub fn psd_check(m: &ComplexMatrix, tol: f64) -> Result<PsdVerdict> {
    let eig = eigh(m)?;
    let lmin = eig.min_eigenvalue();
    if lmin < -tol {
        Ok(PsdVerdict::NotPsd { min_eigenvalue: lmin, witness: eig.vector(0) })
    } else {
        Ok(PsdVerdict::Psd { min_eigenvalue: lmin })
    }
}

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clamped to 0).
pub fn psd_project(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m, tol::EIG_TOL)?;
    if eig.min_eigenvalue() >= 0.0 {
        return Ok(m.hermitian_part());
    }
    Ok(eig.reconstruct_with(|l| l.max(0.0)))
}

/// Transposes the outer 2x2 block index of a `2d x 2d` matrix: blocks (1,2)
/// and (2,1) are swapped, each block kept as is.
pub fn partial_transpose(h: &ComplexMatrix, block_dim: usize) -> Result<ComplexMatrix> {
    let n = h.ensure_square()?;
    if n != 2 * block_dim {
        return Err(Error::DimensionMismatch(format!(
            "partial transpose of a {n}x{n} matrix with block dimension {block_dim}"
        )));
    }
    let d = block_dim;
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (bi, a) = (r / d, r % d);
        let (bj, b) = (c / d, c % d);
        h[(bj * d + a, bi * d + b)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::{matrix::ZERO, ONE};
    use crate::rng;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    #[test]
    fn sqrt_basics() {
        let i = ComplexMatrix::identity(3);
        assert!(close(&psd_sqrt(&i).unwrap(), &i, 1e-15));
        let d = ComplexMatrix::from_diag(&[4.0, 9.0]);
        assert!(close(&psd_sqrt(&d).unwrap(), &ComplexMatrix::from_diag(&[2.0, 3.0]), 1e-14));
        let bad = ComplexMatrix::from_diag(&[1.0, -0.5]);
        assert!(matches!(psd_sqrt(&bad), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn sqrt_clamps_tiny_negative() {
        let d = ComplexMatrix::from_diag(&[1.0, -1e-13]);
        let s = psd_sqrt(&d).unwrap();
        assert_eq!(s[(1, 1)], ZERO);
    }

    #[test]
    fn inv_sqrt_basics() {
        let i = ComplexMatrix::identity(2);
        assert!(close(&psd_inv_sqrt(&i, 1e-12).unwrap(), &i, 1e-15));
        let d = ComplexMatrix::from_diag(&[4.0, 0.25]);
        assert!(close(&psd_inv_sqrt(&d, 1e-12).unwrap(), &ComplexMatrix::from_diag(&[0.5, 2.0]), 1e-14));
        let s = ComplexMatrix::from_diag(&[1.0, 0.0]);
        assert!(matches!(psd_inv_sqrt(&s, 1e-12), Err(Error::Singular { .. })));
    }

    #[test]
    fn random_pd_functions() {
        let mut r = rng::stream(3, "functions", 0);
        for n in 1..=8 {
            let m = &rng::psd(&mut r, n, n + 2) + &ComplexMatrix::identity(n).scale(0.1);
            let s = psd_sqrt(&m).unwrap();
            assert!(close(&(&s * &s), &m, 1e-9));
            let ri = psd_inv_sqrt(&m, 1e-12).unwrap();
            let id = &(&ri * &m) * &ri;
            assert!(close(&id, &ComplexMatrix::identity(n), 1e-9));
        }
    }

    #[test]
    fn psd_check_verdicts() {
        let v = psd_check(&ComplexMatrix::from_diag(&[1.0, 0.0]), 1e-10).unwrap();
        assert_eq!(v, PsdVerdict::Psd { min_eigenvalue: 0.0 });
        match psd_check(&ComplexMatrix::from_diag(&[1.0, -1.0]), 1e-10).unwrap() {
            PsdVerdict::NotPsd { min_eigenvalue, witness } => {
                assert_eq!(min_eigenvalue, -1.0);
                assert_eq!(witness[0], ZERO);
                assert_eq!(witness[1].norm(), 1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn projection_characterization() {
        let p = psd_project(&ComplexMatrix::from_diag(&[1.0, -1.0])).unwrap();
        assert!(close(&p, &ComplexMatrix::from_diag(&[1.0, 0.0]), 1e-15));

        let mut r = rng::stream(4, "functions", 0);
        for n in [2, 4, 8] {
            let a = rng::psd(&mut r, n, 2);
            assert!(close(&psd_project(&a).unwrap(), &a, 1e-12 * a.frobenius_norm().max(1.0)));

            let h = rng::hermitian(&mut r, n);
            let p = psd_project(&h).unwrap();
            let resid = &h - &p;
            assert!(resid.frobenius_inner(&p).norm() < 1e-10);
            let lmax = eigh(&resid).unwrap().max_eigenvalue();
            assert!(lmax <= 1e-10, "residual not NSD: {lmax}");
        }
    }

    #[test]
    fn partial_transpose_properties() {
        let mut r = rng::stream(5, "functions", 0);
        let h = rng::hermitian(&mut r, 6);
        let pt = partial_transpose(&h, 3).unwrap();
        assert_eq!(partial_transpose(&pt, 3).unwrap(), h);
        assert!(pt.hermitian_defect() < 1e-14);

        let a = rng::hermitian(&mut r, 3);
        let z = ComplexMatrix::zeros(3, 3);
        let bd = ComplexMatrix::from_blocks(&[vec![&a, &z], vec![&z, &a]]).unwrap();
        assert_eq!(partial_transpose(&bd, 3).unwrap(), bd);

        assert!(matches!(partial_transpose(&h, 2), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn transpose_map_choi_is_copositive() {
        // Choi matrix of A -> A^T on M_2: block (i,j) is E_ji.
        let e = |i: usize, j: usize| {
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(i, j)] = ONE;
            m
        };
        let (e00, e01, e10, e11) = (e(0, 0), e(0, 1), e(1, 0), e(1, 1));
        let h = ComplexMatrix::from_blocks(&[vec![&e00, &e10], vec![&e01, &e11]]).unwrap();
        assert!(!psd_check(&h, 1e-12).unwrap().is_psd());
        let pt = partial_transpose(&h, 2).unwrap();
        assert!(psd_check(&pt, 1e-12).unwrap().is_psd());
    }
}

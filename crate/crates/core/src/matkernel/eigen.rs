//! Cyclic Jacobi eigensolver for dense Hermitian matrices.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tol;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V f(Lambda) V*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Hermitian eigendecomposition with the default stopping threshold.
pub fn eigh(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eig(m, tol::EIG_TOL)
}

/// Cyclic Jacobi: sweeps over all pairs `(p, q)` and annihilates `a_pq` with a
/// complex rotation until the off-diagonal Frobenius norm drops to
/// `tol * ||M||_F`. At most [`tol::MAX_SWEEPS`] sweeps.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let n = m.ensure_hermitian()?;
    let scale = m.frobenius_norm();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold || off == 0.0 {
            break;
        }
        if sweeps == tol::MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Applies `A <- G* A G`, `V <- V G` where `G` acts on coordinates `p, q` and
/// zeroes `a_pq`. With `a_pq = r e^{i phi}`, `G = diag(1, e^{-i phi}) R` and
/// `R` is the real Jacobi rotation for `[[a_pp, r], [r, a_qq]]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip rotations below rounding level relative to the diagonal.
    if r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e = phase.conj();

    // G = [[c, s], [-s e, c e]] on (p, q).
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -e * s;
    let g_qq = e * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Smallest eigenvalue and a unit eigenvector for it.
pub fn min_eigenpair(m: &ComplexMatrix) -> Result<(f64, Vec<C64>)> {
    let eig = eigh(m)?;
    Ok((eig.min_eigenvalue(), eig.vector(0)))
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigh(m)?.min_eigenvalue())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn residuals(m: &ComplexMatrix, e: &EigenDecomposition) -> (f64, f64, f64) {
        let recon = (&e.reconstruct() - m).frobenius_norm();
        let vtv = &e.eigenvectors.adjoint() * &e.eigenvectors;
        let orth = (&vtv - &ComplexMatrix::identity(m.rows())).frobenius_norm();
        let mut pair = 0.0f64;
        for k in 0..e.dim() {
            let v = e.vector(k);
            let mv = m.mul_vec(&v);
            let r: f64 = mv.iter().zip(&v).map(|(a, b)| (a - b * e.eigenvalues[k]).norm_sqr()).sum();
            pair = pair.max(r.sqrt());
        }
        (recon, orth, pair)
    }

    #[test]
    fn diagonal_input() {
        let m = ComplexMatrix::from_diag(&[2.0, 1.0]);
        let e = eigh(&m).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0]);
        assert_eq!(e.vector(0)[1].norm(), 1.0);
        assert_eq!(e.vector(1)[0].norm(), 1.0);
    }

    #[test]
    fn pauli_x() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = eigh(&m).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_complex_phases() {
        let m = ComplexMatrix::from_vec(2, 2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).unwrap();
        let e = eigh(&m).unwrap();
        let (recon, orth, pair) = residuals(&m, &e);
        assert!(recon < 1e-14 && orth < 1e-14 && pair < 1e-14);
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut r = rng::stream(11, "eig-test", 0);
        for n in [1, 2, 3, 5, 8, 12, 16] {
            let m = rng::hermitian(&mut r, n);
            let e = eigh(&m).unwrap();
            let (recon, orth, pair) = residuals(&m, &e);
            let scale = m.frobenius_norm();
            assert!(recon <= 1e-10 * scale.max(1.0), "n={n} recon={recon}");
            assert!(orth <= 1e-12, "n={n} orth={orth}");
            assert!(pair <= 1e-10 * scale, "n={n} pair={pair}");
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let mut r = rng::stream(12, "eig-test", 0);
        let q = rng::unitary(&mut r, 6);
        let d = ComplexMatrix::from_diag(&[1.0, 1.0, 1.0, -2.0, -2.0, 0.0]);
        let m = (&(&q * &d) * &q.adjoint()).hermitian_part();
        let e = eigh(&m).unwrap();
        let expect = [-2.0, -2.0, 0.0, 1.0, 1.0, 1.0];
        for (a, b) in e.eigenvalues.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_matrix() {
        let e = eigh(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian { .. })));
    }
}

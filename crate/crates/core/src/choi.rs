//! Choi matrices of maps `M_2(C) -> M_{n+1}(C)` and their face-form blocks.
//!
//! For a map in the face `F_{e2,f1}` the Choi matrix splits as
//!
//! ```text
//!     [ a   C  | x   Y ]
//!     [ C*  B  | Z*  T ]
//! H = [--------+-------]
//!     [ x̄   Z  | 0   0 ]
//!     [ Y*  T* | 0   U ]
//! ```
//!
//! with `C, Y, Z` rows of length `n` and `B, T, U` of size `n x n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkernel::{self, inner, ComplexMatrix, C64, ZERO};
use crate::tol;

/// Choi matrix `[phi(E_ij)]` of a Hermiticity-preserving map into `M_{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChoiMatrix {
    n: usize,
    h: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn new(h: ComplexMatrix) -> Result<Self> {
        let size = h.ensure_hermitian()?;
        if size < 4 || size % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix of a map on M_2 needs even size >= 4, got {size}"
            )));
        }
        Ok(Self { n: size / 2 - 1, h })
    }

    /// `n`, where the codomain is `M_{n+1}`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Codomain dimension `n + 1`.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.h
    }

    /// `phi(E_ij)` for `i, j` in `{0, 1}`.
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        let d = self.dim();
        self.h.submatrix(i * d, j * d, d, d)
    }

    /// `phi(I) = phi(E_11) + phi(E_22)`.
    pub fn apply_identity(&self) -> ComplexMatrix {
        &self.block(0, 0) + &self.block(1, 1)
    }

    pub fn partial_transpose(&self) -> ChoiMatrix {
        let h = matkernel::partial_transpose(&self.h, self.dim()).expect("square by construction");
        ChoiMatrix { n: self.n, h }
    }
}

/// Assembles `[phi(E_ij)]` from the action on matrix units (indices 0-based).
pub fn choi_from_map(apply: impl Fn(usize, usize) -> ComplexMatrix, n: usize) -> Result<ChoiMatrix> {
    let d = n + 1;
    let images: Vec<Vec<ComplexMatrix>> = (0..2).map(|i| (0..2).map(|j| apply(i, j)).collect()).collect();
    for (i, row) in images.iter().enumerate() {
        for (j, m) in row.iter().enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "phi(E_{}{}) is {}x{}, expected {d}x{d}",
                    i + 1,
                    j + 1,
                    m.rows(),
                    m.cols()
                )));
            }
        }
    }
    images[0][0].ensure_hermitian()?;
    images[1][1].ensure_hermitian()?;
    let defect = (&images[1][0] - &images[0][1].adjoint()).frobenius_norm();
    let tol = tol::herm_tol(images[0][1].frobenius_norm());
    if defect > tol {
        return Err(Error::NotHermitian { defect, tol });
    }
    let h = ComplexMatrix::from_blocks(&[
        vec![&images[0][0], &images[0][1]],
        vec![&images[1][0], &images[1][1]],
    ])?;
    ChoiMatrix::new(h)
}

/// `phi(A) = sum_ij A_ij phi(E_ij)`.
pub fn apply_map(h: &ChoiMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("map input must be 2x2, got {}x{}", a.rows(), a.cols())));
    }
    let d = h.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..2 {
        for j in 0..2 {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            out = &out + &h.block(i, j).scale_c(aij);
        }
    }
    Ok(out)
}

/// A `1 x n` complex row matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowVector(pub Vec<C64>);

impl RowVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![ZERO; n])
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[C64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        matkernel::norm(&self.0)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    /// `X*` as a vector in `C^n`.
    pub fn adjoint_vector(&self) -> Vec<C64> {
        self.0.iter().map(|z| z.conj()).collect()
    }

    /// `xi_X = X* / ||X||`, `None` for `X = 0`.
    pub fn direction(&self) -> Option<Vec<C64>> {
        matkernel::normalized(&self.adjoint_vector())
    }

    pub fn as_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::row_vector(&self.0)
    }

    /// `X* X`, an `n x n` rank-one PSD matrix.
    pub fn gram(&self) -> ComplexMatrix {
        let v = self.adjoint_vector();
        ComplexMatrix::outer(&v, &v)
    }

    /// `X * M` for an `n x n` matrix `M`.
    pub fn mul_matrix(&self, m: &ComplexMatrix) -> Self {
        Self((0..m.cols()).map(|j| (0..self.len()).map(|i| self.0[i] * m[(i, j)]).sum()).collect())
    }
}

/// `|X| = (X* X)^{1/2} = ||X|| P_{xi_X}`, the rank-one closed form.
pub fn row_abs(x: &RowVector) -> ComplexMatrix {
    let norm = x.norm();
    if norm == 0.0 {
        return ComplexMatrix::zeros(x.len(), x.len());
    }
    x.gram().scale(1.0 / norm)
}

/// `|X1| |X2| = <xi_{X1}, xi_{X2}> X1* X2`, zero if either row vanishes.
pub fn row_abs_product(x1: &RowVector, x2: &RowVector) -> ComplexMatrix {
    match (x1.direction(), x2.direction()) {
        (Some(xi1), Some(xi2)) => {
            let c = inner(&xi1, &xi2);
            // X1* X2 as an outer product: (X1*)_i (X2)_j.
            ComplexMatrix::from_fn(x1.len(), x2.len(), |i, j| c * x1.0[i].conj() * x2.0[j])
        }
        _ => ComplexMatrix::zeros(x1.len(), x2.len()),
    }
}

/// Named pieces of a face-form Choi matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChoiBlocks {
    pub a: f64,
    pub x: C64,
    pub c: RowVector,
    pub y: RowVector,
    pub z: RowVector,
    pub b: ComplexMatrix,
    pub t: ComplexMatrix,
    pub u: ComplexMatrix,
}

impl ChoiBlocks {
    /// Unital face form: `a = 1`, `C = 0`, `x = 0`.
    pub fn unital(y: RowVector, z: RowVector, b: ComplexMatrix, t: ComplexMatrix, u: ComplexMatrix) -> Self {
        let n = y.len();
        Self { a: 1.0, x: ZERO, c: RowVector::zeros(n), y, z, b, t, u }
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    fn check_shapes(&self) -> Result<usize> {
        let n = self.n();
        let rows_ok = self.c.len() == n && self.z.len() == n;
        let mats_ok = [&self.b, &self.t, &self.u].iter().all(|m| m.rows() == n && m.cols() == n);
        if n == 0 || !rows_ok || !mats_ok {
            return Err(Error::DimensionMismatch(format!("inconsistent block sizes for n = {n}")));
        }
        Ok(n)
    }

    /// Full `2(n+1)`-square matrix, without the Hermiticity check.
    pub fn assemble_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.check_shapes()?;
        let d = n + 1;
        let mut h = ComplexMatrix::zeros(2 * d, 2 * d);
        h[(0, 0)] = C64::new(self.a, 0.0);
        h[(0, d)] = self.x;
        h[(d, 0)] = self.x.conj();
        for k in 0..n {
            h[(0, 1 + k)] = self.c.0[k];
            h[(1 + k, 0)] = self.c.0[k].conj();
            h[(0, d + 1 + k)] = self.y.0[k];
            h[(d + 1 + k, 0)] = self.y.0[k].conj();
            h[(d, 1 + k)] = self.z.0[k];
            h[(1 + k, d)] = self.z.0[k].conj();
        }
        h.set_submatrix(1, 1, &self.b);
        h.set_submatrix(1, d + 1, &self.t);
        h.set_submatrix(d + 1, 1, &self.t.adjoint());
        h.set_submatrix(d + 1, d + 1, &self.u);
        Ok(h)
    }

    pub fn assemble(&self) -> Result<ChoiMatrix> {
        ChoiMatrix::new(self.assemble_matrix()?)
    }

    /// Checks `a = 1`, `C = 0`, `x = 0` within the structural tolerance.
    pub fn ensure_unital_face_form(&self) -> Result<()> {
        self.check_shapes()?;
        let mut problems = Vec::new();
        if (self.a - 1.0).abs() > tol::STRUCT_TOL {
            problems.push(format!("a = {}", self.a));
        }
        if self.c.norm() > tol::STRUCT_TOL {
            problems.push(format!("||C|| = {:e}", self.c.norm()));
        }
        if self.x.norm() > tol::STRUCT_TOL {
            problems.push(format!("|x| = {:e}", self.x.norm()));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::NotUnitalFaceForm(problems.join(", ")))
        }
    }

    /// Conjugates the codomain by `1 ⊕ q` for a unitary `q` on `C^n`, i.e.
    /// `phi'(A) = G* phi(A) G`; the face `F_{e2,f1}` is preserved.
    pub fn conjugate(&self, q: &ComplexMatrix) -> Self {
        let qa = q.adjoint();
        Self {
            a: self.a,
            x: self.x,
            c: self.c.mul_matrix(q),
            y: self.y.mul_matrix(q),
            z: self.z.mul_matrix(q),
            b: &(&qa * &self.b) * q,
            t: &(&qa * &self.t) * q,
            u: &(&qa * &self.u) * q,
        }
    }
}

/// Splits a face-form Choi matrix into its named blocks.
///
/// Fails with [`Error::NotInFaceForm`] if `x` or the first row of block
/// `(2,2)` exceeds [`tol::STRUCT_TOL`].
pub fn extract_blocks(h: &ChoiMatrix) -> Result<ChoiBlocks> {
    let m = h.matrix();
    let n = h.n();
    let d = n + 1;
    let mut offending = Vec::new();
    for k in 0..d {
        let v = m[(d, d + k)].norm();
        if v > tol::STRUCT_TOL {
            offending.push((d, d + k, v));
        }
    }
    let xv = m[(0, d)].norm();
    if xv > tol::STRUCT_TOL {
        offending.push((0, d, xv));
    }
    if !offending.is_empty() {
        return Err(Error::NotInFaceForm { entries: offending });
    }
    Ok(ChoiBlocks {
        a: m[(0, 0)].re,
        x: m[(0, d)],
        c: RowVector((0..n).map(|k| m[(0, 1 + k)]).collect()),
        y: RowVector((0..n).map(|k| m[(0, d + 1 + k)]).collect()),
        z: RowVector((0..n).map(|k| m[(d, 1 + k)]).collect()),
        b: m.submatrix(1, 1, n, n),
        t: m.submatrix(1, d + 1, n, n),
        u: m.submatrix(d + 1, d + 1, n, n),
    })
}

/// Raw block split that skips the face-form zero-pattern check.
pub fn split_blocks_unchecked(h: &ChoiMatrix) -> ChoiBlocks {
    let m = h.matrix();
    let n = h.n();
    let d = n + 1;
    ChoiBlocks {
        a: m[(0, 0)].re,
        x: m[(0, d)],
        c: RowVector((0..n).map(|k| m[(0, 1 + k)]).collect()),
        y: RowVector((0..n).map(|k| m[(0, d + 1 + k)]).collect()),
        z: RowVector((0..n).map(|k| m[(d, 1 + k)]).collect()),
        b: m.submatrix(1, 1, n, n),
        t: m.submatrix(1, d + 1, n, n),
        u: m.submatrix(d + 1, d + 1, n, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::ONE;
    use crate::rng;

    fn unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(i, j)] = ONE;
        m
    }

    #[test]
    fn embedding_map_choi() {
        // A -> diag(A, 0, ..., 0) into M_3.
        let h = choi_from_map(|i, j| unit(3, i, j), 2).unwrap();
        let m = h.matrix();
        assert_eq!(m[(0, 0)], ONE);
        assert_eq!(m[(0, 4)], ONE);
        assert_eq!(m[(4, 0)], ONE);
        assert_eq!(m[(4, 4)], ONE);
        assert_eq!(m.frobenius_norm(), 2.0);
    }

    #[test]
    fn apply_inverts_choi() {
        let mut r = rng::stream(1, "choi-test", 0);
        let images: Vec<ComplexMatrix> = {
            let a = rng::hermitian(&mut r, 3);
            let b = rng::ginibre(&mut r, 3, 3);
            let c = rng::hermitian(&mut r, 3);
            vec![a, b.clone(), b.adjoint(), c]
        };
        let h = choi_from_map(|i, j| images[2 * i + j].clone(), 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut e = ComplexMatrix::zeros(2, 2);
                e[(i, j)] = ONE;
                assert_eq!(apply_map(&h, &e).unwrap(), images[2 * i + j]);
            }
        }
        let a = ComplexMatrix::from_vec(2, 2, vec![ONE, C64::new(0.0, 1.0), C64::new(0.0, -1.0), ONE]).unwrap();
        let out = apply_map(&h, &a).unwrap();
        assert!(out.hermitian_defect() < 1e-14);
    }

    #[test]
    fn choi_from_map_rejects_bad_images() {
        assert!(matches!(choi_from_map(|i, j| unit(2, i, j), 2), Err(Error::DimensionMismatch(_))));
        let skew = |i: usize, j: usize| if (i, j) == (0, 0) { unit(2, 0, 1) } else { ComplexMatrix::zeros(2, 2) };
        assert!(matches!(choi_from_map(skew, 1), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn block_round_trip() {
        let mut r = rng::stream(2, "choi-test", 0);
        let n = 3;
        let row = |r: &mut rng::StreamRng| RowVector((0..n).map(|_| rng::gaussian_complex(r)).collect());
        let blocks = ChoiBlocks {
            a: 0.7,
            x: ZERO,
            c: row(&mut r),
            y: row(&mut r),
            z: row(&mut r),
            b: rng::hermitian(&mut r, n),
            t: rng::ginibre(&mut r, n, n),
            u: rng::hermitian(&mut r, n),
        };
        let h = blocks.assemble().unwrap();
        let back = extract_blocks(&h).unwrap();
        assert_eq!(back, blocks);
        assert_eq!(back.assemble().unwrap(), h);
    }

    #[test]
    fn nonzero_x_is_not_face_form() {
        let mut blocks = ChoiBlocks::unital(
            RowVector::zeros(2),
            RowVector::zeros(2),
            ComplexMatrix::identity(2),
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::zeros(2, 2),
        );
        blocks.x = C64::new(1e-3, 0.0);
        let h = blocks.assemble().unwrap();
        match extract_blocks(&h) {
            Err(Error::NotInFaceForm { entries }) => assert_eq!(entries, vec![(0, 3, 1e-3)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn row_abs_examples() {
        let a = row_abs(&RowVector::from_real(&[1.0, 0.0]));
        assert!((&a - &ComplexMatrix::from_diag(&[1.0, 0.0])).frobenius_norm() < 1e-15);

        let x = RowVector(vec![C64::new(3.0, 0.0), C64::new(0.0, 4.0)]);
        let a = row_abs(&x);
        // |X| = ||X|| P_xi with xi = X*/5 = (3, -4i)/5.
        let xi = [C64::new(0.6, 0.0), C64::new(0.0, -0.8)];
        let expect = ComplexMatrix::outer(&xi, &xi).scale(5.0);
        assert!((&a - &expect).frobenius_norm() < 1e-14);

        assert_eq!(row_abs(&RowVector::zeros(3)).frobenius_norm(), 0.0);
    }

    #[test]
    fn row_abs_matches_spectral_square_root() {
        let mut r = rng::stream(11, "choi-test", 1);
        for n in 1..=6 {
            let x = RowVector((0..n).map(|_| rng::gaussian_complex(&mut r)).collect());
            let spectral = crate::matkernel::psd_sqrt(&x.gram()).unwrap();
            assert!((&row_abs(&x) - &spectral).frobenius_norm() < 1e-11);
        }
    }

    #[test]
    fn row_abs_product_examples() {
        let e1 = RowVector::from_real(&[1.0, 0.0]);
        let e2 = RowVector::from_real(&[0.0, 1.0]);
        assert_eq!(row_abs_product(&e1, &e1), ComplexMatrix::from_diag(&[1.0, 0.0]));
        assert_eq!(row_abs_product(&e1, &e2).frobenius_norm(), 0.0);
        assert_eq!(row_abs_product(&e1, &RowVector::zeros(2)).frobenius_norm(), 0.0);
    }

    #[test]
    fn conjugation_preserves_face_form() {
        let mut r = rng::stream(3, "choi-test", 0);
        let n = 3;
        let row = |r: &mut rng::StreamRng| RowVector((0..n).map(|_| rng::gaussian_complex(r)).collect());
        let blocks = ChoiBlocks::unital(row(&mut r), row(&mut r), rng::hermitian(&mut r, n), rng::ginibre(&mut r, n, n), rng::hermitian(&mut r, n));
        let q = rng::unitary(&mut r, n);
        let conj = blocks.conjugate(&q);
        let mut g = ComplexMatrix::identity(n + 1);
        g.set_submatrix(1, 1, &q);
        let h = blocks.assemble().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = &(&g.adjoint() * &h.block(i, j)) * &g;
                let got = conj.assemble().unwrap().block(i, j);
                assert!((&expect - &got).frobenius_norm() < 1e-12);
            }
        }
    }
}

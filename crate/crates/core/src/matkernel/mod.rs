//! Dense Hermitian linear algebra for small complex matrices.

mod eigen;
mod functions;
mod matrix;

pub use eigen::{eigh, hermitian_eig, min_eigenpair, min_eigenvalue, EigenDecomposition};
pub use functions::{
    partial_transpose, psd_check, psd_inv_sqrt, psd_inverse, psd_project, psd_sqrt, PsdVerdict,
};
pub use matrix::{
    basis_vector, inner, norm, norm_sqr, normalized, orthonormalize_columns, ComplexMatrix, C64, ONE, ZERO,
};

//! Numerical tolerances shared across modules.
//!
//! Absolute unless the name says otherwise. Matrices in this crate are at
//! most a few dozen rows, so double-precision rounding stays near 1e-15
//! relative and all thresholds below sit several orders above it.

/// Relative Hermiticity tolerance: `||M - M*||_F <= HERM_TOL_REL * max(1, ||M||_F)`.
pub const HERM_TOL_REL: f64 = 1e-10;

/// Jacobi stopping threshold, relative to `||M||_F`.
pub const EIG_TOL: f64 = 1e-12;

/// Maximum number of cyclic Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues above `-CLAMP_TOL * max(1, ||M||_F)` are treated as zero when
/// taking square roots.
pub const CLAMP_TOL: f64 = 1e-10;

/// Zero-pattern tolerance for face-form Choi matrices.
pub const STRUCT_TOL: f64 = 1e-9;

/// Slack needed before an inequality is called proper.
pub const STRICT_TOL: f64 = 1e-7;

/// Residual bound for `phi(P_xi) eta = 0`.
pub const FACE_TOL: f64 = 1e-8;

/// A PPT state must beat this to certify nondecomposability.
pub const WITNESS_TOL: f64 = 1e-6;

/// Feasibility tolerance for decomposition certificates.
pub const FEAS_TOL: f64 = 1e-7;

/// Default violation threshold for positivity searches.
pub const SEARCH_TOL: f64 = 1e-9;

/// Scale-aware linear dependence: `sigma_2 <= RANK_TOL * (sigma_1 + 1)`.
pub const RANK_TOL: f64 = 1e-8;

/// Frobenius gap below which `|Y| + |Z| = U^{1/2}` counts as equality.
pub const EQUALITY_TOL: f64 = 1e-8;

/// Validation bounds on witness states.
pub const STATE_EIG_TOL: f64 = 1e-8;
pub const STATE_TRACE_TOL: f64 = 1e-9;

pub(crate) fn herm_tol(frobenius: f64) -> f64 {
    HERM_TOL_REL * frobenius.max(1.0)
}

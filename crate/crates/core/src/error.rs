use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: ||M - M*||_F = {defect:e} exceeds {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("{what} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { what: String, min_eigenvalue: f64 },

    #[error("matrix is singular: eigenvalue {eigenvalue:e} <= {rank_tol:e}")]
    Singular { eigenvalue: f64, rank_tol: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Choi matrix is not in face form; offending entries: {entries:?}")]
    NotInFaceForm { entries: Vec<(usize, usize, f64)> },

    #[error("scalars violate p, q >= 0 and |s|^2 <= pq: p = {p}, q = {q}, |s| = {s_abs}")]
    BadScalars { p: f64, q: f64, s_abs: f64 },

    #[error("blocks are not in unital face form (a = 1, C = 0, x = 0): {0}")]
    NotUnitalFaceForm(String),

    #[error("parameters outside 0 < mu < 1, 0 < eps <= mu^2/6: mu = {mu}, eps = {eps}")]
    BadParams { mu: f64, eps: f64 },

    #[error("Y and Z are not linearly dependent (second singular value {sigma2:e})")]
    NotDependent { sigma2: f64 },

    #[error("canonical zero pattern violated: {what} residual {residual:e}")]
    ZeroPatternViolation { what: String, residual: f64 },

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("invalid decomposition certificate: {0}")]
    InvalidCertificate(String),

    #[error("B is singular (min eigenvalue {min_eigenvalue:e})")]
    SingularB { min_eigenvalue: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

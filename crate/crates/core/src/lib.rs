//! Positive linear maps `M_2(C) -> M_{n+1}(C)` through their Choi matrices.
//!
//! The crate checks positivity and block-positivity, complete positivity and
//! copositivity, and decomposability (with PSD / PPT certificates), builds the
//! Tang nondecomposable family together with its unital face-form
//! normalization, and computes the canonical form of maps in the equality case
//! `|Y| + |Z| = U^{1/2}`.
//!
//! Every verdict carries checkable evidence: eigenvectors for violations,
//! factorizations for PSD claims, decomposition pairs, and PPT witness states.

pub mod choi;
pub mod cpdecomp;
pub mod error;
pub mod extremal;
pub mod io;
pub mod matkernel;
pub mod par;
pub mod positivity;
pub mod report;
pub mod rng;
pub mod suite;
pub mod tang;
pub mod tol;

pub use error::{Error, Result};
pub use matkernel::{ComplexMatrix, C64};
pub use par::Execution;

//! Seeded random streams.
//!
//! A single 64-bit seed drives every stochastic stage; each stage derives its
//! own stream from `(seed, stage name, index)` so stages stay reproducible
//! independently of one another and of thread scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use crate::matkernel::ComplexMatrix;

pub type StreamRng = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_2d0c_u64;

pub fn stream_seed(seed: u64, stage: &str, index: u64) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(stage.as_bytes());
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn stream(seed: u64, stage: &str, index: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, stage, index))
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Uniformly distributed unit vector in `C^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| gaussian_complex(rng)).collect();
        let norm = crate::matkernel::norm(&v);
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Random Hermitian matrix `(G + G*) / 2`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    (&g + &g.adjoint()).scale(0.5)
}

/// Random PSD matrix `G G*` with `G` of the given rank.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, rank);
    &g * &g.adjoint()
}

/// Haar-ish random unitary: Gram-Schmidt on a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let g = ginibre(rng, n, n);
        if let Some(q) = crate::matkernel::orthonormalize_columns(&g) {
            return q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_depend_on_stage_and_index() {
        let a = stream_seed(1, "grid", 0);
        assert_eq!(a, stream_seed(1, "grid", 0));
        assert_ne!(a, stream_seed(1, "grid", 1));
        assert_ne!(a, stream_seed(1, "restarts", 0));
        assert_ne!(a, stream_seed(2, "grid", 0));
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = stream(7, "unitary", 0);
        let q = unitary(&mut rng, 5);
        let err = (&(&q.adjoint() * &q) - &ComplexMatrix::identity(5)).frobenius_norm();
        assert!(err < 1e-12, "{err}");
    }
}

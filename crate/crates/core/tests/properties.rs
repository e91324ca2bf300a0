//! Property-based invariants of the numerical kernel and the structure theory.

use posmap::choi::{row_abs, row_abs_product, ChoiMatrix, RowVector};
use posmap::extremal::{
    canonicalize, compress, equality_case_detect, equality_case_fixture, prop13_check,
};
use posmap::matkernel::{eigh, partial_transpose, psd_project, psd_sqrt, ComplexMatrix, C64};
use posmap::positivity::SearchBudget;
use posmap::{io, rng, Execution};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn row(n: usize) -> impl Strategy<Value = RowVector> {
    prop::collection::vec(complex(), n).prop_map(RowVector)
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex(), n * n).prop_map(move |v| {
        let g = ComplexMatrix::from_vec(n, n, v).unwrap();
        (&g + &g.adjoint()).scale(0.5)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(m in (1usize..7).prop_flat_map(hermitian)) {
        let e = eigh(&m).unwrap();
        let err = (&e.reconstruct() - &m).frobenius_norm();
        prop_assert!(err <= 1e-11 * m.frobenius_norm().max(1.0));
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn psd_sqrt_squares_back(m in (1usize..6).prop_flat_map(hermitian)) {
        let p = &m * &m;
        let r = psd_sqrt(&p).unwrap();
        prop_assert!((&(&r * &r) - &p).frobenius_norm() <= 1e-9 * p.frobenius_norm().max(1.0));
    }

    #[test]
    fn psd_projection_is_idempotent(m in (1usize..6).prop_flat_map(hermitian)) {
        let p = psd_project(&m).unwrap();
        let pp = psd_project(&p).unwrap();
        prop_assert!((&p - &pp).frobenius_norm() <= 1e-10 * m.frobenius_norm().max(1.0));
    }

    #[test]
    fn partial_transpose_is_an_involution(m in (2usize..5).prop_flat_map(|d| hermitian(2 * d))) {
        let d = m.rows() / 2;
        let back = partial_transpose(&partial_transpose(&m, d).unwrap(), d).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn row_abs_is_norm_times_projector((x1, x2) in (1usize..7).prop_flat_map(|n| (row(n), row(n)))) {
        prop_assume!(x1.norm() > 1e-6 && x2.norm() > 1e-6);
        let a1 = row_abs(&x1);
        prop_assert!((&(&a1 * &a1) - &x1.gram()).frobenius_norm() <= 1e-10 * x1.norm().powi(2).max(1.0));
        let eig = psd_sqrt(&x1.gram()).unwrap();
        let prod = &eig * &psd_sqrt(&x2.gram()).unwrap();
        prop_assert!((&row_abs_product(&x1, &x2) - &prod).frobenius_norm() <= 1e-10 * (x1.norm() * x2.norm()).max(1.0));
    }

    #[test]
    fn matrix_json_round_trips_bitwise(m in (1usize..5).prop_flat_map(hermitian)) {
        let back: ComplexMatrix = io::from_json(&io::to_json(&m).unwrap()).unwrap();
        prop_assert_eq!(io::input_digest(&back), io::input_digest(&m));
        prop_assert_eq!(back, m);
    }
}

fn budget() -> SearchBudget {
    SearchBudget { restarts: 16, ..SearchBudget::default() }.with_execution(Execution::Sequential)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn scrambled_equality_maps_canonicalize(n in 2usize..5, index in 0u64..10_000, seed in 0u64..1000) {
        let fx = equality_case_fixture(n, seed, index, &budget()).unwrap();
        prop_assert!(equality_case_detect(&fx.blocks, 1e-9).unwrap().equality);
        // Certified positive and in the equality case: the rows must be dependent.
        let dep = prop13_check(&fx.blocks);
        prop_assert!(dep.dependent, "sigma2 = {:e}", dep.sigma2);
        let canon = canonicalize(&fx.blocks).unwrap();
        prop_assert!((canon.u - (canon.y.norm() + canon.z.norm()).powi(2)).abs() <= 1e-10);
        prop_assert!((canon.u - fx.canonical.u).abs() <= 1e-8);
        prop_assert!((canon.t.norm() - fx.canonical.t.norm()).abs() <= 1e-8);
        let mut r = rng::stream(seed, "property-rho", index);
        for _ in 0..10 {
            let c = compress(&canon, &rng::unit_vector(&mut r, n)).unwrap();
            prop_assert!(c.margin >= -1e-9);
            prop_assert!(c.conditions.all_hold());
            prop_assert!(c.display_residual <= 1e-12);
        }
    }

    #[test]
    fn equality_gap_is_unitarily_invariant(n in 2usize..5, index in 0u64..10_000) {
        let fx = equality_case_fixture(n, 17, index, &budget()).unwrap();
        let q = rng::unitary(&mut rng::stream(17, "property-unitary", index), n);
        let moved = fx.blocks.conjugate(&q);
        let a = equality_case_detect(&fx.blocks, 1e-9).unwrap().gap;
        let b = equality_case_detect(&moved, 1e-9).unwrap().gap;
        prop_assert!((a - b).abs() <= 1e-9);
        prop_assert!(ChoiMatrix::new(moved.assemble_matrix().unwrap()).is_ok());
    }
}

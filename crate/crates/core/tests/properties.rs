//! Property tests for the cross-module invariants that hold for arbitrary
//! inputs, not just the curated fixtures.

use bscount_core::antisym::Convention;
use bscount_core::bsbound::{halfplane_count, HalfPlane};
use bscount_core::constants::layer_cake_check;
use bscount_core::linalg::{
    default_cluster_tol, general_spectrum, hermitian_eigenvalues, singular_values, ComplexMatrix,
    Spectrum, SpectrumItem,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn small_complex_matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim)
        .prop_flat_map(|n| {
            proptest::collection::vec(
                (
                    proptest::num::f64::NORMAL.prop_map(|x| x % 10.0),
                    proptest::num::f64::NORMAL.prop_map(|x| x % 10.0),
                ),
                n * n,
            )
            .prop_map(move |entries| {
                ComplexMatrix::from_fn(n, |(i, j)| {
                    let (re, im) = entries[i * n + j];
                    Complex64::new(re, im)
                })
                .unwrap()
            })
        })
}

fn finite_spectrum() -> impl Strategy<Value = Spectrum> {
    proptest::collection::vec(
        (
            -5.0f64..5.0,
            -3.0f64..3.0,
            1usize..3,
        ),
        0..12,
    )
    .prop_map(|points| Spectrum {
        items: points
            .into_iter()
            .map(|(re, im, m)| SpectrumItem {
                lambda: Complex64::new(re, im),
                alg_mult: m,
                geo_mult: m,
            })
            .collect(),
        cluster_tol: 1e-8,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn algebraic_multiplicities_sum_to_dim(m in small_complex_matrix(7)) {
        let s = general_spectrum(&m, default_cluster_tol(&m)).unwrap();
        prop_assert_eq!(s.total_alg_mult(), m.dim());
        for it in &s.items {
            prop_assert!(it.geo_mult >= 1 && it.geo_mult <= it.alg_mult);
        }
    }

    #[test]
    fn trace_matches_spectrum(m in small_complex_matrix(7)) {
        let s = general_spectrum(&m, default_cluster_tol(&m)).unwrap();
        let err = (s.trace() - m.trace()).norm();
        prop_assert!(err <= 1e-9 * (1.0 + m.spectral_norm_bound()));
    }

    #[test]
    fn singular_values_square_to_gram_eigenvalues(m in small_complex_matrix(6)) {
        let s = singular_values(&m).unwrap();
        let gram = m.adjoint().matmul(&m).unwrap();
        let ev = hermitian_eigenvalues(&gram).unwrap();
        // the comparison is between squares: tiny singular values below
        // sqrt(eps)*sigma_max are not resolvable through the Gram route
        let scale = 1.0 + s.first().map(|x| x * x).unwrap_or(0.0);
        for (si, li) in s.iter().zip(ev.iter()) {
            prop_assert!((si * si - li).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn kyfan_clamp_dominates_raw(m in small_complex_matrix(6), n in 0usize..6) {
        let h = m.hermitian_part();
        let n = n.min(h.dim());
        let raw = bscount_core::antisym::kyfan_sum(&h, n, Convention::Raw).unwrap();
        let clamp = bscount_core::antisym::kyfan_sum(&h, n, Convention::ClampAtZero).unwrap();
        prop_assert!(clamp >= raw - 1e-12);
        prop_assert!(clamp >= 0.0);
    }

    #[test]
    fn halfplane_count_nested_in_eps(s in finite_spectrum(), alpha in -3.0f64..3.0) {
        let mut prev = usize::MAX;
        for eps in [0.0, 0.1, 0.5, 2.0, 8.0] {
            let hp = HalfPlane::new(alpha, eps).unwrap();
            let n = halfplane_count(&s, &hp).count;
            prop_assert!(n <= prev);
            prev = n;
        }
    }

    #[test]
    fn layer_cake_exact_on_random_spectra(
        s in finite_spectrum(),
        gamma in 0.25f64..3.0,
        alpha in -2.0f64..2.0,
    ) {
        let r = layer_cake_check(&s, gamma, alpha).unwrap();
        prop_assert!(r.rel_err <= 1e-12);
    }
}

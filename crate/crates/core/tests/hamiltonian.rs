mod common;

use common::any_spec;
use lambda_wqed_core::hamiltonian::{build_h1, dissipation_matrix};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dissipation_matrix_is_psd(spec in any_spec()) {
        let d = dissipation_matrix(&spec);
        let scale = spec.params.gamma_1d.max(1.0) * spec.n_atoms() as f64;
        prop_assert!(d.eigenvalues().iter().all(|&x| x >= -1e-12 * scale));
    }

    #[test]
    fn effective_hamiltonian_is_passive_and_complex_symmetric(spec in any_spec()) {
        let h = build_h1(&spec);
        prop_assert_eq!(h.dim(), 2 * spec.n_atoms());
        prop_assert!(h.dissipation_spectrum().iter().all(|&x| x >= -1e-12));
        prop_assert!((&h.matrix - h.matrix.transpose()).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn decay_part_equals_half_dissipation_plus_free_space(spec in any_spec()) {
        let h = build_h1(&spec);
        let d = dissipation_matrix(&spec);
        let n = spec.n_atoms();
        for i in 0..n {
            for j in 0..n {
                let anti = -(h.matrix[(i, j)] - h.matrix[(j, i)].conj()).im * 0.5;
                let want = 0.5 * d.matrix[(i, j)] + if i == j { 0.5 * spec.params.gamma_e } else { 0.0 };
                prop_assert!((anti - want).abs() < 1e-12);
            }
        }
    }
}

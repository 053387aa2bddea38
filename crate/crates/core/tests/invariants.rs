use proptest::prelude::*;
use qfunctor_core::matkernel::hs_inner;
use qfunctor_core::qfun::{dilation, g_forward, g_inverse, quantum_function_residuals};
use qfunctor_core::qrel::QuantumRelation;
use qfunctor_core::sample::{random_algebra, random_hom, random_matrix};
use qfunctor_core::{ComplexMatrix, OperatorSubspace, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hs_inner_is_conjugate_symmetric(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5) {
        let mut r = rng(seed);
        let (a, b) = (random_matrix(&mut r, rows, cols), random_matrix(&mut r, rows, cols));
        let (ab, ba) = (hs_inner(&a, &b).unwrap(), hs_inner(&b, &a).unwrap());
        prop_assert!((ab - ba.conj()).norm() < 1e-12 * (1.0 + ab.norm()));
    }

    #[test]
    fn projection_is_idempotent_and_orthogonal(seed in any::<u64>(), k in 1usize..6) {
        let t = Tolerances::default();
        let mut r = rng(seed);
        let vecs: Vec<ComplexMatrix> = (0..k).map(|_| random_matrix(&mut r, 2, 3)).collect();
        let s = OperatorSubspace::orthonormalize(3, 2, &vecs, &t).unwrap();
        prop_assert!(s.orthonormality_defect() < 1e-12);
        let m = random_matrix(&mut r, 2, 3);
        let p = s.project(&m).unwrap();
        prop_assert!(s.project(&p).unwrap().distance(&p) < 1e-12);
        let rest = &m - &p;
        for b in s.basis() {
            prop_assert!(hs_inner(b, &rest).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn matrix_json_round_trips(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4) {
        let m = random_matrix(&mut rng(seed), rows, cols);
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn bimodule_closure_validates(seed in any::<u64>()) {
        let t = Tolerances::default();
        let mut r = rng(seed);
        let m = random_algebra(&mut r, 4, &t).unwrap().algebra;
        let n = random_algebra(&mut r, 4, &t).unwrap().algebra;
        let s = random_matrix(&mut r, n.hilbert_dim(), m.hilbert_dim());
        let rel = QuantumRelation::bimodule_closure(m, n, &[s], &t).unwrap();
        prop_assert!(rel.bimodule_residual().unwrap() < 1e-9);
    }

    #[test]
    fn g_pipeline_round_trips(seed in any::<u64>()) {
        let t = Tolerances::default();
        let inst = random_hom(&mut rng(seed), 6, &t).unwrap();
        let g = g_forward(&inst.hom, &t).unwrap();
        prop_assert!(quantum_function_residuals(&g, &t).unwrap().passes(&t));
        let back = g_inverse(&g, &t).unwrap();
        prop_assert!(back.distance(&inst.hom, &t).unwrap() <= 1e-8);
        let w = dilation(&inst.hom, &t).unwrap();
        prop_assert!(w.isometry_residual() <= 1e-9);
    }
}

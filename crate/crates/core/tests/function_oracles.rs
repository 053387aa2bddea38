use qfunctor_core::classical::{function_to_hom, hom_to_function, relation_to_quantum, ClassicalFunction};
use qfunctor_core::qfun::{
    compose_hom, dilation, extract_family, g_forward, g_inverse, homomorphism_from_family, homotopy_residual,
    intertwine_residual, is_quantum_function, verify_generation, DilationIsometry, Homomorphism,
};
use qfunctor_core::qrel::QuantumRelation;
use qfunctor_core::sample::{random_algebra, random_hom, random_hom_from, random_unitary};
use qfunctor_core::vnalg::{BlockSpec, VonNeumannAlgebra};
use qfunctor_core::{ComplexMatrix, Tolerances};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn amplification_dilates_over_two_indices() {
    let t = tol();
    let n = VonNeumannAlgebra::from_blocks(&BlockSpec::new(&[(2, 1)])).unwrap();
    let m = VonNeumannAlgebra::from_blocks(&BlockSpec::new(&[(2, 2)])).unwrap();
    let i2 = ComplexMatrix::identity(2);
    let pi = Homomorphism::from_fn(n, m, |b| b.kron(&i2)).unwrap();
    let w = dilation(&pi, &t).unwrap();
    assert_eq!(w.index_size(), 2);
    assert!(w.isometry_residual() < 1e-12);
    for (b, img) in pi.source().basis().iter().zip(pi.images()) {
        assert!(w.compress(b).unwrap().distance(img) < 1e-12);
    }
}

#[test]
fn classical_dilation_is_a_graph_isometry() {
    let t = tol();
    for f in ClassicalFunction::enumerate(3, 2) {
        let pi = function_to_hom(&f).unwrap();
        let w = dilation(&pi, &t).unwrap();
        // every column holds a single entry of modulus one, in a row (f(x), α)
        let m = w.matrix();
        for x in 0..3 {
            let nonzero: Vec<usize> = (0..m.rows()).filter(|&r| m.get(r, x).norm() > 1e-12).collect();
            assert_eq!(nonzero.len(), 1, "{f:?}");
            assert!((m.get(nonzero[0], x).norm() - 1.0).abs() < 1e-14);
            assert_eq!(nonzero[0] / w.index_size(), f.map[x]);
        }
        assert!(w.isometry_residual() < 1e-14);
    }
}

#[test]
fn rotating_the_dilation_breaks_intertwining() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let n = VonNeumannAlgebra::from_blocks(&BlockSpec::new(&[(1, 1), (1, 1)])).unwrap();
    let pi = Homomorphism::identity(&n);
    let w = dilation(&pi, &t).unwrap();
    assert!(intertwine_residual(&w, &pi).unwrap() < 1e-12);
    let u = random_unitary(&mut rng, w.matrix().rows());
    let rotated = DilationIsometry::new(&u * w.matrix(), w.index_size()).unwrap();
    assert!(rotated.isometry_residual() < 1e-12);
    assert!(intertwine_residual(&rotated, &pi).unwrap() > 1e-3);
}

#[test]
fn dilations_from_different_orders_are_homotopic() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let r = random_hom(&mut rng, 5, &t).unwrap();
        let g = g_forward(&r.hom, &t).unwrap();
        let mut order: Vec<usize> = (0..g.space().dim()).collect();
        order.shuffle(&mut rng);
        let f0 = extract_family(&g, &t).unwrap();
        let f1 = extract_family(&g.with_basis_order(&order).unwrap(), &t).unwrap();
        let w0 = DilationIsometry::from_family(&f0).unwrap();
        let w1 = DilationIsometry::from_family(&f1).unwrap();
        assert!(homotopy_residual(&w0, &w1, &r.hom).unwrap() < 1e-9);

        // both families give the same homomorphism, also after padding
        let p0 = homomorphism_from_family(&g, &f0, &t).unwrap();
        let p1 = homomorphism_from_family(&g, &f1.padded(f1.len() + 2), &t).unwrap();
        assert!(p0.distance(&p1, &t).unwrap() < 1e-8);
    }
}

#[test]
fn distinct_classical_functions_are_not_homotopic() {
    let t = tol();
    let f = ClassicalFunction::new(2, 2, vec![0, 1]).unwrap();
    let g = ClassicalFunction::new(2, 2, vec![1, 0]).unwrap();
    let (pf, pg) = (function_to_hom(&f).unwrap(), function_to_hom(&g).unwrap());
    let (wf, wg) = (dilation(&pf, &t).unwrap(), dilation(&pg, &t).unwrap());
    assert!(homotopy_residual(&wf, &wg, &pf).unwrap() > 1e-3);
}

#[test]
fn generation_holds_for_small_classical_graphs() {
    let t = tol();
    for x in 1..=2 {
        for y in 1..=2 {
            for f in ClassicalFunction::enumerate(x, y) {
                let pi = function_to_hom(&f).unwrap();
                let g = g_forward(&pi, &t).unwrap();
                let w = dilation(&pi, &t).unwrap();
                assert!(verify_generation(&g, &w, &t).unwrap(), "{f:?}");
            }
        }
    }
    let m2 = VonNeumannAlgebra::from_blocks(&BlockSpec::new(&[(2, 1)])).unwrap();
    let d = QuantumRelation::diagonal(&m2);
    let w = DilationIsometry::from_family(&extract_family(&d, &t).unwrap()).unwrap();
    assert!(verify_generation(&d, &w, &t).unwrap());
}

#[test]
fn g_respects_composition_on_random_chains() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..30 {
        let m2 = random_algebra(&mut rng, 4, &t).unwrap();
        let pi1 = random_hom_from(&mut rng, &m2, 5, &t).unwrap();
        let pi0 = random_hom_from(&mut rng, &pi1.target, 6, &t).unwrap();
        let composite = compose_hom(&pi0.hom, &pi1.hom, &t).unwrap();
        let lhs = g_forward(&composite, &t).unwrap();
        let rhs = QuantumRelation::compose(&g_forward(&pi1.hom, &t).unwrap(), &g_forward(&pi0.hom, &t).unwrap(), &t).unwrap();
        assert!(lhs.same_space(&rhs, &t).unwrap());
        assert!(is_quantum_function(&rhs, &t).unwrap());
    }
}

#[test]
fn classical_g_matches_graphs_and_pullbacks() {
    let t = tol();
    for x in 1..=3 {
        for y in 1..=3 {
            for f in ClassicalFunction::enumerate(x, y) {
                let pi = function_to_hom(&f).unwrap();
                let g = g_forward(&pi, &t).unwrap();
                let graph = relation_to_quantum(&f.graph(), &t).unwrap();
                assert!(g.same_space(&graph, &t).unwrap(), "{f:?}");
                let back = g_inverse(&graph, &t).unwrap();
                assert_eq!(hom_to_function(&back, &t).unwrap(), f);
            }
        }
    }
}

#[test]
fn pullbacks_compose_contravariantly() {
    let t = tol();
    for f in ClassicalFunction::enumerate(3, 2) {
        for g in ClassicalFunction::enumerate(2, 3) {
            let gf = g.compose(&f).unwrap();
            let lhs = function_to_hom(&gf).unwrap();
            let rhs = compose_hom(&function_to_hom(&f).unwrap(), &function_to_hom(&g).unwrap(), &t).unwrap();
            assert!(lhs.distance(&rhs, &t).unwrap() < 1e-12);
        }
    }
}

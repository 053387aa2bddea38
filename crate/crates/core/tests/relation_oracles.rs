use qfunctor_core::classical::{classical_predicates, diag_algebra, quantum_to_relation, relation_to_quantum, ClassicalRelation};
use qfunctor_core::qrel::QuantumRelation;
use qfunctor_core::sample::{random_algebra, random_matrix};
use qfunctor_core::vnalg::{BlockSpec, VonNeumannAlgebra};
use qfunctor_core::{ComplexMatrix, OperatorSubspace, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Is `a v b` a multiple of `v` for every diagonal unit pair?
fn one_dim_bimodule_by_triples(v: &ComplexMatrix) -> bool {
    let (k, h) = v.shape();
    let vv = v.frobenius_norm().powi(2);
    (0..k).all(|i| {
        (0..h).all(|j| {
            let p = &(&ComplexMatrix::unit(k, k, i, i) * v) * &ComplexMatrix::unit(h, h, j, j);
            let c: num_complex::Complex64 = v.data().iter().zip(p.data()).map(|(a, b)| a.conj() * b).sum();
            (&p - &v.scale(c / vv)).frobenius_norm() < 1e-12
        })
    })
}

#[test]
fn diagonal_bimodule_examples_match_triple_products() {
    let t = Tolerances::default();
    let l2 = diag_algebra(2).unwrap();
    let e11 = ComplexMatrix::unit(2, 2, 0, 0);
    let e11_e12 = &e11 + &ComplexMatrix::unit(2, 2, 0, 1);
    for v in [e11, e11_e12] {
        let space = OperatorSubspace::orthonormalize(2, 2, std::slice::from_ref(&v), &t).unwrap();
        let r = QuantumRelation::new(l2.clone(), l2.clone(), space).unwrap();
        assert_eq!(r.validate(&t).unwrap(), one_dim_bimodule_by_triples(&v));
    }
}

#[test]
fn closure_between_scalars_is_everything() {
    let t = Tolerances::default();
    let ch = VonNeumannAlgebra::from_blocks(&BlockSpec::new(&[(1, 2)])).unwrap();
    let ck = VonNeumannAlgebra::from_blocks(&BlockSpec::new(&[(1, 3)])).unwrap();
    let seed = random_matrix(&mut ChaCha8Rng::seed_from_u64(31), 3, 2);
    let r = QuantumRelation::bimodule_closure(ch, ck, &[seed], &t).unwrap();
    assert!(r.space().subspace_eq(&OperatorSubspace::full(2, 3), &t).unwrap());
}

#[test]
fn inverse_is_an_involution() {
    let t = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..20 {
        let m = random_algebra(&mut rng, 4, &t).unwrap().algebra;
        let n = random_algebra(&mut rng, 4, &t).unwrap().algebra;
        let seed = random_matrix(&mut rng, n.hilbert_dim(), m.hilbert_dim());
        let r = QuantumRelation::bimodule_closure(m, n, &[seed], &t).unwrap();
        assert!(r.validate(&t).unwrap());
        let inv = r.inverse(&t).unwrap();
        assert!(inv.validate(&t).unwrap());
        assert!(inv.inverse(&t).unwrap().same_space(&r, &t).unwrap());
    }
}

fn check_composition(f: &ClassicalRelation, g: &ClassicalRelation, t: &Tolerances) {
    // set-theoretic oracle: (z, x) iff some y has (z, y) ∈ g and (y, x) ∈ f
    let mut expected = Vec::new();
    for z in 0..g.y_size {
        for x in 0..f.x_size {
            if (0..f.y_size).any(|y| g.contains(z, y) && f.contains(y, x)) {
                expected.push((z, x));
            }
        }
    }
    let qf = relation_to_quantum(f, t).unwrap();
    let qg = relation_to_quantum(g, t).unwrap();
    let composed = QuantumRelation::compose(&qg, &qf, t).unwrap();
    let back = quantum_to_relation(&composed, t).unwrap();
    assert_eq!(back.pairs.into_iter().collect::<Vec<_>>(), expected);
    assert_eq!(composed.space().dim(), expected.len());
}

#[test]
fn classical_composition_on_two_points_is_exhaustive() {
    let t = Tolerances::default();
    for f in ClassicalRelation::enumerate(2, 2) {
        for g in ClassicalRelation::enumerate(2, 2) {
            check_composition(&f, &g, &t);
        }
    }
}

#[test]
fn classical_composition_on_three_points_sampled() {
    let t = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..300 {
        let (x, y, z) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=3));
        let f = ClassicalRelation::from_mask(x, y, rng.random_range(0..1u64 << (x * y)));
        let g = ClassicalRelation::from_mask(y, z, rng.random_range(0..1u64 << (y * z)));
        check_composition(&f, &g, &t);
    }
}

#[test]
fn predicates_on_four_points_sampled() {
    let t = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..200 {
        let f = ClassicalRelation::from_mask(4, 4, rng.random_range(0..1u64 << 16));
        let q = relation_to_quantum(&f, &t).unwrap();
        assert_eq!(q.properties(&t).unwrap(), classical_predicates(&f).unwrap(), "{f:?}");
    }
}

#[test]
fn strict_order_on_three_points() {
    let t = Tolerances::default();
    let lt = ClassicalRelation::new(3, 3, [(1, 0), (2, 0), (2, 1)]).unwrap();
    let p = relation_to_quantum(&lt, &t).unwrap().properties(&t).unwrap();
    assert!(!p.reflexive && !p.symmetric && p.antisymmetric && p.transitive);
}

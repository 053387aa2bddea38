use qfunctor_core::matkernel::{hs_inner, null_space, polar_partial_isometry, svd};
use qfunctor_core::sample::{random_matrix, random_unitary};
use qfunctor_core::{ComplexMatrix, OperatorSubspace, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank of a set of matrices: count singular values of the matrix whose
/// columns are their row-major coordinates.
fn coordinate_rank(mats: &[ComplexMatrix], tol: f64) -> usize {
    let n = mats[0].rows() * mats[0].cols();
    let coords = ComplexMatrix::from_fn(n, mats.len(), |i, j| mats[j].data()[i]);
    let s = svd(&coords).unwrap().singular_values;
    s.iter().filter(|&&x| x > tol * s[0]).count()
}

#[test]
fn hs_norm_matches_entrywise_sum() {
    let mut r = rng(1);
    for _ in 0..20 {
        let a = random_matrix(&mut r, 3, 4);
        let direct: f64 = a.data().iter().map(|z| z.norm_sqr()).sum();
        let ip = hs_inner(&a, &a).unwrap();
        assert!((ip.re - direct).abs() < 1e-12 * direct);
        assert!(ip.im.abs() < 1e-12);
    }
}

#[test]
fn span_dimension_matches_rank_oracle() {
    let mut r = rng(2);
    let t = Tolerances::default();
    let mut mats: Vec<ComplexMatrix> = (0..10).map(|_| random_matrix(&mut r, 3, 3)).collect();
    for i in 0..10 {
        for j in i + 1..10 {
            mats.push(&mats[i] + &mats[j]);
        }
    }
    let s = OperatorSubspace::orthonormalize(3, 3, &mats, &t).unwrap();
    assert_eq!(s.dim(), coordinate_rank(&mats, 1e-10));
    assert!(s.dim() <= 9);

    // low-rank family: combinations of three fixed matrices
    let base: Vec<ComplexMatrix> = (0..3).map(|_| random_matrix(&mut r, 3, 3)).collect();
    let combos: Vec<ComplexMatrix> = (0..8)
        .map(|k| {
            let k = k as f64;
            let c = [1.0 + k, -0.5 * k * k, 2.0 - k];
            &(&base[0].scale_real(c[0]) + &base[1].scale_real(c[1])) + &base[2].scale_real(c[2])
        })
        .collect();
    let s = OperatorSubspace::orthonormalize(3, 3, &combos, &t).unwrap();
    assert_eq!(s.dim(), coordinate_rank(&combos, 1e-10));
    assert_eq!(s.dim(), 3);
}

#[test]
fn full_space_contains_everything() {
    let t = Tolerances::default();
    let full = OperatorSubspace::full(2, 2);
    let m = random_matrix(&mut rng(3), 2, 2);
    assert!(full.contains(&m, &t).unwrap());
    assert!(full.project(&m).unwrap().distance(&m) < 1e-12);
}

#[test]
fn rotated_basis_spans_same_space() {
    let t = Tolerances::default();
    let mut r = rng(4);
    let vecs: Vec<ComplexMatrix> = (0..4).map(|_| random_matrix(&mut r, 3, 2)).collect();
    let s = OperatorSubspace::orthonormalize(2, 3, &vecs, &t).unwrap();
    let u = random_unitary(&mut r, s.dim());
    let rotated: Vec<ComplexMatrix> = (0..s.dim())
        .map(|j| {
            s.basis()
                .iter()
                .enumerate()
                .fold(ComplexMatrix::zeros(3, 2), |acc, (i, b)| &acc + &b.scale(u.get(i, j)))
        })
        .collect();
    let s2 = OperatorSubspace::orthonormalize(2, 3, &rotated, &t).unwrap();
    assert!(s.subspace_eq(&s2, &t).unwrap());
    let other = OperatorSubspace::orthonormalize(2, 3, &vecs[..2], &t).unwrap();
    assert!(!s.subspace_eq(&other, &t).unwrap());
}

#[test]
fn intersection_dimension_formula() {
    let t = Tolerances::default();
    let mut r = rng(5);
    for _ in 0..10 {
        // column vectors in C^4
        let a: Vec<ComplexMatrix> = (0..3).map(|_| random_matrix(&mut r, 4, 1)).collect();
        let b: Vec<ComplexMatrix> = (0..3).map(|_| random_matrix(&mut r, 4, 1)).collect();
        let sa = OperatorSubspace::orthonormalize(1, 4, &a, &t).unwrap();
        let sb = OperatorSubspace::orthonormalize(1, 4, &b, &t).unwrap();
        let all: Vec<ComplexMatrix> = a.iter().chain(&b).cloned().collect();
        let expected = 3 + 3 - coordinate_rank(&all, 1e-10);
        let meet = sa.intersect(&sb, &t).unwrap();
        assert_eq!(meet.dim(), expected);
        assert!(meet.dim() >= 2);
        assert!(meet.leq(&sa, &t).unwrap() && meet.leq(&sb, &t).unwrap());
    }
}

#[test]
fn constructed_rank_two_null_space() {
    let t = Tolerances::default();
    let mut r = rng(6);
    let m = &random_matrix(&mut r, 4, 2) * &random_matrix(&mut r, 2, 4);
    let ker = null_space(&m, &t).unwrap();
    assert_eq!(ker.dim(), 2);
    for x in ker.basis() {
        assert!((&m * x).frobenius_norm() < 1e-10 * m.frobenius_norm());
    }
}

#[test]
fn polar_initial_projection_matches_pseudoinverse() {
    let t = Tolerances::default();
    let mut r = rng(7);

    // full column rank: m⁺m is the identity
    let m = random_matrix(&mut r, 3, 2);
    let p = polar_partial_isometry(&m, &t).unwrap();
    assert!((&p.u.adjoint() * &p.u).distance(&ComplexMatrix::identity(2)) < 1e-10);
    assert!((&p.u * &p.abs).distance(&m) < 1e-10);

    // rank one: m = a b*, so m⁺m = b b* / |b|²
    let a = random_matrix(&mut r, 3, 1);
    let b = random_matrix(&mut r, 3, 1);
    let m = &a * &b.adjoint();
    let p = polar_partial_isometry(&m, &t).unwrap();
    let bb = &b * &b.adjoint();
    let oracle = bb.scale_real(1.0 / b.frobenius_norm().powi(2));
    assert!((&p.u.adjoint() * &p.u).distance(&oracle) < 1e-10);
    let uu = &p.u * &p.u.adjoint();
    assert!((&uu * &p.u).distance(&p.u) < 1e-10);
}

#[test]
fn adjoint_is_an_involution_on_subspaces() {
    let t = Tolerances::default();
    let mut r = rng(8);
    let vecs: Vec<ComplexMatrix> = (0..3).map(|_| random_matrix(&mut r, 2, 3)).collect();
    let s = OperatorSubspace::orthonormalize(3, 2, &vecs, &t).unwrap();
    let back = s.adjoint(&t).unwrap().adjoint(&t).unwrap();
    assert!(s.subspace_eq(&back, &t).unwrap());
}

#[test]
fn kron_mixed_product() {
    let mut r = rng(9);
    let (a, b, c, d) = (
        random_matrix(&mut r, 2, 2),
        random_matrix(&mut r, 2, 2),
        random_matrix(&mut r, 2, 2),
        random_matrix(&mut r, 2, 2),
    );
    let lhs = &a.kron(&b) * &c.kron(&d);
    let rhs = (&a * &c).kron(&(&b * &d));
    assert!(lhs.distance(&rhs) < 1e-12);
}

#[test]
fn product_span_of_matrix_units() {
    let t = Tolerances::default();
    let e12 = OperatorSubspace::orthonormalize(2, 2, &[ComplexMatrix::unit(2, 2, 0, 1)], &t).unwrap();
    let e21 = OperatorSubspace::orthonormalize(2, 2, &[ComplexMatrix::unit(2, 2, 1, 0)], &t).unwrap();
    let prod = OperatorSubspace::product_span(&e12, &e21, &t).unwrap();
    assert_eq!(prod.dim(), 1);
    assert!(prod.contains(&ComplexMatrix::unit(2, 2, 0, 0), &t).unwrap());
    let zero = OperatorSubspace::product_span(&e12, &e12, &t).unwrap();
    assert!(zero.is_zero());
}

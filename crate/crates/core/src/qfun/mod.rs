//! Quantum functions and their correspondence with unital *-homomorphisms.
//!
//! For `π: N -> M` with `M ⊆ B(H)` and `N ⊆ B(K)`, [`g_forward`] produces
//! the quantum function `{v ∈ B(H, K) : b v = v π(b)}` from `M` to `N`.
//! [`g_inverse`] goes back through a partial isometry family
//! ([`extract_family`]) and `b ↦ Σ u_α* b u_α`. [`dilation`] packages the
//! same family as an isometry `w` with `π(b) = w* (b ⊗ 1) w`.

mod dilation;
mod family;
mod homomorphism;

pub use dilation::{
    dilation, generation_sides, homotopy_residual, intertwine_residual, range_projection_residual, verify_generation,
    verify_homotopy, verify_intertwine, DilationIsometry,
};
pub use family::{extract_family, FamilyResiduals, PartialIsometryFamily};
pub use homomorphism::{compose_hom, Homomorphism, HomomorphismResiduals};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matkernel::{null_space_scaled, ComplexMatrix, OperatorSubspace, Tolerances};
use crate::qrel::QuantumRelation;

/// Residuals of the two quantum-function inclusions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumFunctionResiduals {
    /// How far `M'` sticks out of `V*V`.
    pub totality: f64,
    /// How far `VV*` sticks out of `N'`.
    pub single_valuedness: f64,
}

impl QuantumFunctionResiduals {
    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.totality <= tol.membership_tol && self.single_valuedness <= tol.membership_tol
    }
}

/// Residuals of `M' ⊆ V*V` and `VV* ⊆ N'`; the relation must validate.
pub fn quantum_function_residuals(r: &QuantumRelation, tol: &Tolerances) -> Result<QuantumFunctionResiduals> {
    r.require_valid(tol)?;
    let v = r.space();
    let v_star = v.adjoint(tol)?;
    let vsv = OperatorSubspace::product_span(&v_star, v, tol)?;
    let vvs = OperatorSubspace::product_span(v, &v_star, tol)?;
    Ok(QuantumFunctionResiduals {
        totality: vsv.max_residual_of(r.source().commutant())?,
        single_valuedness: r.target().commutant().max_residual_of(&vvs)?,
    })
}

/// `M' ⊆ V*V` and `VV* ⊆ N'`.
pub fn is_quantum_function(r: &QuantumRelation, tol: &Tolerances) -> Result<bool> {
    Ok(quantum_function_residuals(r, tol)?.passes(tol))
}

/// Like [`is_quantum_function`] but reports which inclusion fails.
pub fn require_quantum_function(r: &QuantumRelation, tol: &Tolerances) -> Result<()> {
    let res = quantum_function_residuals(r, tol)?;
    if res.totality > tol.membership_tol {
        return Err(Error::NotQuantumFunction(format!(
            "M' ⊄ V*V (residual {:.3e})",
            res.totality
        )));
    }
    if res.single_valuedness > tol.membership_tol {
        return Err(Error::NotQuantumFunction(format!(
            "VV* ⊄ N' (residual {:.3e})",
            res.single_valuedness
        )));
    }
    Ok(())
}

/// `G(π) = {v ∈ B(H, K) : b v = v π(b) for all b ∈ N}`, as a relation from
/// `π`'s target `M` to its source `N`.
///
/// Solved as the kernel of the stacked map `v ↦ b v - v π(b)` over the
/// source basis and its adjoints.
pub fn g_forward(pi: &Homomorphism, tol: &Tolerances) -> Result<QuantumRelation> {
    pi.require_valid(tol)?;
    let h = pi.target().hilbert_dim();
    let k = pi.source().hilbert_dim();
    let mut pairs: Vec<(ComplexMatrix, ComplexMatrix)> = Vec::new();
    for (b, img) in pi.source().basis().iter().zip(pi.images()) {
        pairs.push((b.clone(), img.clone()));
        pairs.push((b.adjoint(), img.adjoint()));
    }

    let n = k * h;
    let mut map = ComplexMatrix::zeros(n * pairs.len(), n);
    for idx in 0..n {
        let unit = ComplexMatrix::unit(k, h, idx / h, idx % h);
        for (c, (b, img)) in pairs.iter().enumerate() {
            let image = &(b * &unit) - &(&unit * img);
            for (row, z) in image.data().iter().enumerate() {
                map.set(c * n + row, idx, *z);
            }
        }
    }
    let scale = pairs
        .iter()
        .map(|(b, img)| b.frobenius_norm().max(img.frobenius_norm()))
        .fold(0.0, f64::max);
    let kernel = null_space_scaled(&map, scale, tol)?;
    let elements: Vec<ComplexMatrix> = kernel
        .basis()
        .iter()
        .map(|x| x.reshape(k, h))
        .collect::<Result<_>>()?;
    let space = OperatorSubspace::orthonormalize(h, k, &elements, tol)?;
    QuantumRelation::new(pi.target().clone(), pi.source().clone(), space)
}

/// `b ↦ Σ u_α* b u_α` for a given family in `r`, as a map from `r`'s target
/// to its source. Validated before returning.
pub fn homomorphism_from_family(
    r: &QuantumRelation,
    family: &PartialIsometryFamily,
    tol: &Tolerances,
) -> Result<Homomorphism> {
    if family.source_dim() != r.source().hilbert_dim() || family.target_dim() != r.target().hilbert_dim() {
        return Err(Error::ShapeMismatch("family does not fit the relation".into()));
    }
    let h = r.source().hilbert_dim();
    let images = r
        .target()
        .basis()
        .iter()
        .map(|b| {
            family.members().iter().fold(ComplexMatrix::zeros(h, h), |acc, u| {
                &acc + &(&(&u.adjoint() * b) * u)
            })
        })
        .collect();
    let pi = Homomorphism::new(r.target().clone(), r.source().clone(), images)?;
    pi.require_valid(tol).map_err(|e| Error::IllConditioned(format!("compressed map is not a homomorphism: {e}")))?;
    Ok(pi)
}

/// `G⁻¹(V)`: the homomorphism `N -> M` induced by any partial isometry
/// family in the quantum function `V`.
pub fn g_inverse(r: &QuantumRelation, tol: &Tolerances) -> Result<Homomorphism> {
    require_quantum_function(r, tol)?;
    let family = extract_family(r, tol)?;
    homomorphism_from_family(r, &family, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vnalg::{BlockSpec, VonNeumannAlgebra};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn alg(blocks: &[(usize, usize)]) -> VonNeumannAlgebra {
        VonNeumannAlgebra::from_blocks(&BlockSpec::new(blocks)).unwrap()
    }

    #[test]
    fn diagonal_relation_is_quantum_function() {
        for blocks in [&[(2, 1)][..], &[(1, 1), (1, 1)], &[(2, 2)], &[(1, 3)]] {
            let d = QuantumRelation::diagonal(&alg(blocks));
            assert!(is_quantum_function(&d, &tol()).unwrap(), "{blocks:?}");
        }
    }

    #[test]
    fn zero_relation_is_not_a_function() {
        let m = alg(&[(1, 1), (1, 1)]);
        let r = QuantumRelation::new(m.clone(), m, OperatorSubspace::zero(2, 2)).unwrap();
        assert!(!is_quantum_function(&r, &tol()).unwrap());
        let err = require_quantum_function(&r, &tol()).unwrap_err();
        assert!(err.to_string().contains("V*V"), "{err}");
    }

    #[test]
    fn non_single_valued_relation_names_the_inclusion() {
        // {(0,0), (1,0)}: x = 0 relates to two points
        let t = tol();
        let m = alg(&[(1, 1), (1, 1)]);
        let space = OperatorSubspace::orthonormalize(
            2,
            2,
            &[ComplexMatrix::unit(2, 2, 0, 0), ComplexMatrix::unit(2, 2, 1, 0), ComplexMatrix::unit(2, 2, 1, 1)],
            &t,
        )
        .unwrap();
        let r = QuantumRelation::new(m.clone(), m, space).unwrap();
        let err = require_quantum_function(&r, &t).unwrap_err();
        assert!(err.to_string().contains("N'"), "{err}");
    }

    #[test]
    fn invalid_relation_rejected() {
        let m = alg(&[(1, 1), (1, 1)]);
        let bad = OperatorSubspace::orthonormalize(2, 2, &[ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap()], &tol()).unwrap();
        let r = QuantumRelation::new(m.clone(), m, bad).unwrap();
        assert!(matches!(is_quantum_function(&r, &tol()), Err(Error::InvalidRelation(_))));
    }

    #[test]
    fn g_of_identity_is_commutant() {
        let t = tol();
        for blocks in [&[(2, 1)][..], &[(1, 1), (1, 1), (1, 1)], &[(2, 2)], &[(1, 2), (2, 1)]] {
            let m = alg(blocks);
            let g = g_forward(&Homomorphism::identity(&m), &t).unwrap();
            assert!(g.space().subspace_eq(m.commutant(), &t).unwrap(), "{blocks:?}");
        }
    }

    #[test]
    fn g_of_one_dimensional_source_is_everything() {
        let t = tol();
        let c1 = alg(&[(1, 1)]);
        let m = alg(&[(2, 1), (1, 1)]);
        let pi = Homomorphism::from_fn(c1, m.clone(), |b| m.identity().scale(b.get(0, 0))).unwrap();
        let g = g_forward(&pi, &t).unwrap();
        assert_eq!(g.space().dim(), 3);
        assert!(is_quantum_function(&g, &t).unwrap());
    }

    #[test]
    fn g_forward_rejects_invalid_map() {
        let m = alg(&[(2, 1)]);
        let bad = Homomorphism::from_fn(m.clone(), m, |b| b.transpose()).unwrap();
        assert!(matches!(g_forward(&bad, &tol()), Err(Error::InvalidHomomorphism(_))));
    }

    #[test]
    fn g_inverse_of_diagonal_is_identity() {
        let t = tol();
        for blocks in [&[(2, 1)][..], &[(1, 1), (1, 1)], &[(2, 2)], &[(1, 2), (2, 1)]] {
            let m = alg(blocks);
            let pi = g_inverse(&QuantumRelation::diagonal(&m), &t).unwrap();
            assert!(pi.distance(&Homomorphism::identity(&m), &t).unwrap() < 1e-10, "{blocks:?}");
        }
    }

    #[test]
    fn g_inverse_requires_quantum_function() {
        let m = alg(&[(2, 1)]);
        let r = QuantumRelation::new(m.clone(), m, OperatorSubspace::full(2, 2)).unwrap();
        assert!(matches!(g_inverse(&r, &tol()), Err(Error::NotQuantumFunction(_))));
    }

    #[test]
    fn amplification_round_trip() {
        let t = tol();
        let n = alg(&[(2, 1)]);
        let m = alg(&[(2, 2)]);
        let i2 = ComplexMatrix::identity(2);
        let pi = Homomorphism::from_fn(n, m, |b| b.kron(&i2)).unwrap();
        let g = g_forward(&pi, &t).unwrap();
        assert_eq!(g.space().dim(), 2);
        assert!(is_quantum_function(&g, &t).unwrap());
        let back = g_inverse(&g, &t).unwrap();
        assert!(back.distance(&pi, &t).unwrap() < 1e-10);
    }
}

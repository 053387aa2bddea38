//! Quantum relations: commutant bimodules `V ⊆ B(H, K)` with `N' V M' ⊆ V`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matkernel::{ComplexMatrix, OperatorSubspace, Tolerances};
use crate::vnalg::VonNeumannAlgebra;

/// A candidate quantum relation from `source` (`M` on `H`) to `target`
/// (`N` on `K`). Construction only checks shapes; use
/// [`QuantumRelation::validate`] for the bimodule property.
#[derive(Debug, Clone, Serialize)]
pub struct QuantumRelation {
    source: VonNeumannAlgebra,
    target: VonNeumannAlgebra,
    space: OperatorSubspace,
}

/// Residuals of the inclusions behind the four relation properties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropertyResiduals {
    pub reflexive: f64,
    pub symmetric: f64,
    pub antisymmetric: f64,
    pub transitive: f64,
}

impl PropertyResiduals {
    pub fn holds(&self, tol: &Tolerances) -> RelationProperties {
        let ok = |r: f64| r <= tol.membership_tol;
        RelationProperties {
            reflexive: ok(self.reflexive),
            symmetric: ok(self.symmetric),
            antisymmetric: ok(self.antisymmetric),
            transitive: ok(self.transitive),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelationProperties {
    pub reflexive: bool,
    pub symmetric: bool,
    pub antisymmetric: bool,
    pub transitive: bool,
}

impl QuantumRelation {
    pub fn new(source: VonNeumannAlgebra, target: VonNeumannAlgebra, space: OperatorSubspace) -> Result<Self> {
        if space.domain_dim() != source.hilbert_dim() || space.codomain_dim() != target.hilbert_dim() {
            return Err(Error::ShapeMismatch(format!(
                "space of {}x{} matrices does not fit algebras on dimensions {} -> {}",
                space.codomain_dim(),
                space.domain_dim(),
                source.hilbert_dim(),
                target.hilbert_dim()
            )));
        }
        Ok(Self { source, target, space })
    }

    pub fn source(&self) -> &VonNeumannAlgebra {
        &self.source
    }

    pub fn target(&self) -> &VonNeumannAlgebra {
        &self.target
    }

    pub fn space(&self) -> &OperatorSubspace {
        &self.space
    }

    /// Largest relative residual of `n' v m'` outside the space, over all
    /// basis triples.
    pub fn bimodule_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for n in self.target.commutant().basis() {
            for v in self.space.basis() {
                let nv = n * v;
                for m in self.source.commutant().basis() {
                    worst = worst.max(self.space.relative_residual(&(&nv * m))?);
                }
            }
        }
        Ok(worst)
    }

    /// `N' V M' ⊆ V`.
    pub fn validate(&self, tol: &Tolerances) -> Result<bool> {
        Ok(self.bimodule_residual()? <= tol.membership_tol)
    }

    pub(crate) fn require_valid(&self, tol: &Tolerances) -> Result<()> {
        let r = self.bimodule_residual()?;
        if r > tol.membership_tol {
            return Err(Error::InvalidRelation(format!(
                "space is not an N'-M' bimodule (residual {r:.3e})"
            )));
        }
        Ok(())
    }

    /// Smallest quantum relation containing `seed`: the span of `n' s m'`.
    ///
    /// One pass is enough because both commutants contain the identity and
    /// are closed under products.
    pub fn bimodule_closure(
        source: VonNeumannAlgebra,
        target: VonNeumannAlgebra,
        seed: &[ComplexMatrix],
        tol: &Tolerances,
    ) -> Result<Self> {
        let (h, k) = (source.hilbert_dim(), target.hilbert_dim());
        if let Some(s) = seed.iter().find(|s| s.shape() != (k, h)) {
            return Err(Error::ShapeMismatch(format!(
                "seed element is {}x{}, expected {k}x{h}",
                s.rows(),
                s.cols()
            )));
        }
        let mut products = Vec::new();
        for n in target.commutant().basis() {
            for s in seed {
                let ns = n * s;
                for m in source.commutant().basis() {
                    products.push(&ns * m);
                }
            }
        }
        let space = OperatorSubspace::orthonormalize(h, k, &products, tol)?;
        let out = Self::new(source, target, space)?;
        debug_assert!(out.validate(tol).unwrap_or(false), "one-pass bimodule closure failed to validate");
        Ok(out)
    }

    /// The diagonal relation `M'` on `M`.
    pub fn diagonal(m: &VonNeumannAlgebra) -> Self {
        Self {
            source: m.clone(),
            target: m.clone(),
            space: m.commutant().clone(),
        }
    }

    /// `V*`, from the target back to the source.
    pub fn inverse(&self, tol: &Tolerances) -> Result<Self> {
        Ok(Self {
            source: self.target.clone(),
            target: self.source.clone(),
            space: self.space.adjoint(tol)?,
        })
    }

    /// `r1 ∘ r0 = span(V1 V0)`; `r1.source` must be `r0.target`.
    pub fn compose(r1: &Self, r0: &Self, tol: &Tolerances) -> Result<Self> {
        if !r1.source.same_algebra(&r0.target, tol)? {
            return Err(Error::AlgebraMismatch(
                "source of the outer relation differs from target of the inner relation".into(),
            ));
        }
        let space = OperatorSubspace::product_span(&r1.space, &r0.space, tol)?;
        Self::new(r0.source.clone(), r1.target.clone(), space)
    }

    /// Relation spanned by `V ∩ W`, both relations between the same algebras.
    pub fn intersect(&self, other: &Self, tol: &Tolerances) -> Result<Self> {
        if !self.source.same_algebra(&other.source, tol)? || !self.target.same_algebra(&other.target, tol)? {
            return Err(Error::AlgebraMismatch("intersected relations live between different algebras".into()));
        }
        Ok(Self {
            source: self.source.clone(),
            target: self.target.clone(),
            space: self.space.intersect(&other.space, tol)?,
        })
    }

    /// Same relation with the basis of the space reordered.
    pub fn with_basis_order(&self, order: &[usize]) -> Result<Self> {
        Ok(Self {
            source: self.source.clone(),
            target: self.target.clone(),
            space: self.space.permuted(order)?,
        })
    }

    pub fn same_space(&self, other: &Self, tol: &Tolerances) -> Result<bool> {
        self.space.subspace_eq(&other.space, tol)
    }

    fn require_endo(&self, tol: &Tolerances) -> Result<()> {
        if !self.source.same_algebra(&self.target, tol)? {
            return Err(Error::AlgebraMismatch("relation properties need a relation on one algebra".into()));
        }
        Ok(())
    }

    /// Residuals of the four property inclusions:
    /// `M' ⊆ V`, `V* ⊆ V`, `V ∩ V* ⊆ M'` and `V V ⊆ V`.
    pub fn property_residuals(&self, tol: &Tolerances) -> Result<PropertyResiduals> {
        self.require_endo(tol)?;
        let adjoint = self.space.adjoint(tol)?;
        let meet = self.space.intersect(&adjoint, tol)?;
        let square = OperatorSubspace::product_span(&self.space, &self.space, tol)?;
        Ok(PropertyResiduals {
            reflexive: self.space.max_residual_of(self.source.commutant())?,
            symmetric: self.space.max_residual_of(&adjoint)?,
            antisymmetric: self.source.commutant().max_residual_of(&meet)?,
            transitive: self.space.max_residual_of(&square)?,
        })
    }

    /// `M' ⊆ V`.
    pub fn is_reflexive(&self, tol: &Tolerances) -> Result<bool> {
        Ok(self.property_residuals(tol)?.reflexive <= tol.membership_tol)
    }

    /// `V* = V`. Both sides have the same dimension, so one inclusion is enough.
    pub fn is_symmetric(&self, tol: &Tolerances) -> Result<bool> {
        Ok(self.property_residuals(tol)?.symmetric <= tol.membership_tol)
    }

    /// `V ∩ V* ⊆ M'`.
    pub fn is_antisymmetric(&self, tol: &Tolerances) -> Result<bool> {
        Ok(self.property_residuals(tol)?.antisymmetric <= tol.membership_tol)
    }

    /// `V V ⊆ V`.
    pub fn is_transitive(&self, tol: &Tolerances) -> Result<bool> {
        Ok(self.property_residuals(tol)?.transitive <= tol.membership_tol)
    }

    pub fn properties(&self, tol: &Tolerances) -> Result<RelationProperties> {
        Ok(self.property_residuals(tol)?.holds(tol))
    }
}

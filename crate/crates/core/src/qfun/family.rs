use serde::Serialize;

use crate::error::{Error, Result};
use crate::matkernel::{polar_partial_isometry, ComplexMatrix, Tolerances};
use crate::qrel::QuantumRelation;

/// Partial isometries `u_α ∈ B(H, K)` with `u_α u_β* = 0` for `α ≠ β` and
/// `Σ u_α* u_α = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct PartialIsometryFamily {
    members: Vec<ComplexMatrix>,
    source_dim: usize,
    target_dim: usize,
}

/// Worst-case residuals of the three family identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyResiduals {
    /// `max ||u u* u - u||_F`
    pub partial_isometry: f64,
    /// `max ||u_α u_β*||_F` over `α ≠ β`
    pub orthogonality: f64,
    /// `||Σ u* u - 1||_F`
    pub completeness: f64,
}

impl FamilyResiduals {
    pub fn max(&self) -> f64 {
        self.partial_isometry.max(self.orthogonality).max(self.completeness)
    }
}

impl PartialIsometryFamily {
    /// Wraps `members` (each `target_dim x source_dim`) without checking the
    /// family identities; see [`PartialIsometryFamily::residuals`].
    pub fn new(source_dim: usize, target_dim: usize, members: Vec<ComplexMatrix>) -> Result<Self> {
        if source_dim == 0 || target_dim == 0 {
            return Err(Error::ShapeMismatch("family dimensions must be positive".into()));
        }
        if let Some(bad) = members.iter().find(|u| u.shape() != (target_dim, source_dim)) {
            return Err(Error::ShapeMismatch(format!(
                "family member is {}x{}, expected {target_dim}x{source_dim}",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(Self {
            members,
            source_dim,
            target_dim,
        })
    }

    pub fn members(&self) -> &[ComplexMatrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// `Σ u_α* u_α`.
    pub fn initial_sum(&self) -> ComplexMatrix {
        let mut sum = ComplexMatrix::zeros(self.source_dim, self.source_dim);
        for u in &self.members {
            sum = &sum + &(&u.adjoint() * u);
        }
        sum
    }

    pub fn residuals(&self) -> FamilyResiduals {
        let partial_isometry = self
            .members
            .iter()
            .map(|u| (&(u * &u.adjoint()) * u).distance(u))
            .fold(0.0, f64::max);
        let mut orthogonality = 0.0f64;
        for (a, ua) in self.members.iter().enumerate() {
            for (b, ub) in self.members.iter().enumerate() {
                if a != b {
                    orthogonality = orthogonality.max((ua * &ub.adjoint()).frobenius_norm());
                }
            }
        }
        let completeness = self.initial_sum().distance(&ComplexMatrix::identity(self.source_dim));
        FamilyResiduals {
            partial_isometry,
            orthogonality,
            completeness,
        }
    }

    /// Appends zero partial isometries until the family has `len` members.
    pub fn padded(&self, len: usize) -> Self {
        let mut members = self.members.clone();
        while members.len() < len {
            members.push(ComplexMatrix::zeros(self.target_dim, self.source_dim));
        }
        Self {
            members,
            source_dim: self.source_dim,
            target_dim: self.target_dim,
        }
    }
}

/// Greedy construction of a partial isometry family inside a quantum
/// function `V`.
///
/// Keeps the defect `p = 1 - Σ u*u`. Each round takes the product `v_i p`
/// of largest Frobenius norm over `V`'s basis (first index wins ties), and
/// adds the partial isometry from its polar decomposition. That isometry
/// has initial space inside `p`, so the rank of `Σ u*u` grows every round
/// and the loop ends after at most `dim H` rounds.
///
/// The totality inclusion `M' ⊆ V*V` is what keeps `Vp` nonzero; if it
/// fails the loop stops with [`Error::NotQuantumFunction`].
pub fn extract_family(r: &QuantumRelation, tol: &Tolerances) -> Result<PartialIsometryFamily> {
    let h = r.source().hilbert_dim();
    let k = r.target().hilbert_dim();
    let space = r.space();
    let identity = ComplexMatrix::identity(h);

    let mut members: Vec<ComplexMatrix> = Vec::new();
    let mut covered = ComplexMatrix::zeros(h, h);
    for _round in 0..=h {
        let defect = &identity - &covered;
        if defect.frobenius_norm() <= tol.rank_tol {
            return PartialIsometryFamily::new(h, k, members);
        }

        let mut best: Option<(f64, ComplexMatrix)> = None;
        for v in space.basis() {
            let vp = v * &defect;
            let norm = vp.frobenius_norm();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, vp));
            }
        }
        let (norm, vp) = match best {
            Some((norm, vp)) if norm > tol.rank_tol => (norm, vp),
            _ => {
                return Err(Error::NotQuantumFunction(format!(
                    "V p vanishes on a nonzero defect of norm {:.3e}, so M' ⊄ V*V",
                    defect.frobenius_norm()
                )))
            }
        };
        debug_assert!(norm > 0.0);

        let u = polar_partial_isometry(&vp, tol)?.u;
        let residual = space.relative_residual(&u)?;
        if residual > tol.membership_tol {
            return Err(Error::IllConditioned(format!(
                "polar part left the relation (residual {residual:.3e})"
            )));
        }
        for prior in &members {
            let overlap = (&u * &prior.adjoint()).frobenius_norm();
            if overlap > tol.eq_tol {
                return Err(Error::IllConditioned(format!(
                    "new partial isometry overlaps an earlier one (||u u_β*|| = {overlap:.3e})"
                )));
            }
        }
        covered = &covered + &(&u.adjoint() * &u);
        members.push(u);
    }
    Err(Error::Numerical(format!(
        "partial isometry extraction did not cover the identity in {h} rounds"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::OperatorSubspace;
    use crate::vnalg::{BlockSpec, VonNeumannAlgebra};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn alg(blocks: &[(usize, usize)]) -> VonNeumannAlgebra {
        VonNeumannAlgebra::from_blocks(&BlockSpec::new(blocks)).unwrap()
    }

    #[test]
    fn scalar_commutant_gives_identity() {
        let m = alg(&[(3, 1)]);
        let fam = extract_family(&QuantumRelation::diagonal(&m), &tol()).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(fam.members()[0].distance(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn row_space_splits_into_two_rank_one_pieces() {
        let t = tol();
        let m = alg(&[(1, 2)]);
        let n = alg(&[(1, 1)]);
        let r = QuantumRelation::new(m, n, OperatorSubspace::full(2, 1)).unwrap();
        let fam = extract_family(&r, &t).unwrap();
        assert_eq!(fam.len(), 2);
        let res = fam.residuals();
        assert!(res.max() < 1e-12, "{res:?}");
        for u in fam.members() {
            let init = &u.adjoint() * u;
            assert!((init.trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn graph_matrix_family_is_exact() {
        // f: {0,1,2} -> {0,1}, f = [1, 0, 1]
        let t = tol();
        let lx = alg(&[(1, 1), (1, 1), (1, 1)]);
        let ly = alg(&[(1, 1), (1, 1)]);
        let units: Vec<_> = [1usize, 0, 1]
            .iter()
            .enumerate()
            .map(|(x, &y)| ComplexMatrix::unit(2, 3, y, x))
            .collect();
        let space = OperatorSubspace::orthonormalize(3, 2, &units, &t).unwrap();
        let r = QuantumRelation::new(lx, ly, space).unwrap();
        let fam = extract_family(&r, &t).unwrap();
        assert!(fam.residuals().max() < 1e-14);
        let graph = &(&units[0] + &units[1]) + &units[2];
        let members_sum = fam.members().iter().fold(ComplexMatrix::zeros(2, 3), |acc, u| &acc + u);
        assert!(members_sum.distance(&graph) < 1e-14);
    }

    #[test]
    fn zero_relation_is_rejected() {
        let m = alg(&[(2, 1)]);
        let r = QuantumRelation::new(m.clone(), m, OperatorSubspace::zero(2, 2)).unwrap();
        assert!(matches!(extract_family(&r, &tol()), Err(Error::NotQuantumFunction(_))));
    }

    #[test]
    fn padding_preserves_identities() {
        let m = alg(&[(2, 1)]);
        let fam = extract_family(&QuantumRelation::diagonal(&m), &tol()).unwrap();
        let padded = fam.padded(4);
        assert_eq!(padded.len(), 4);
        assert!(padded.residuals().max() < 1e-12);
    }
}

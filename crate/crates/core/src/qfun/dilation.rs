use serde::Serialize;

use super::family::PartialIsometryFamily;
use super::homomorphism::Homomorphism;
use crate::error::{Error, Result};
use crate::matkernel::{ComplexMatrix, OperatorSubspace, Tolerances};
use crate::qrel::QuantumRelation;

/// An isometry `w: H -> K ⊗ ℓ²(I)` with `π(b) = w* (b ⊗ 1) w`.
///
/// The row index of `w` for `(k, α)` is `k * index_size + α`, matching
/// [`ComplexMatrix::kron`].
#[derive(Debug, Clone, Serialize)]
pub struct DilationIsometry {
    w: ComplexMatrix,
    index_size: usize,
}

impl DilationIsometry {
    /// `w = Σ u_α ⊗ ê_α`.
    pub fn from_family(family: &PartialIsometryFamily) -> Result<Self> {
        let index_size = family.len();
        if index_size == 0 {
            return Err(Error::InvalidInput("cannot dilate through an empty family".into()));
        }
        let mut w = ComplexMatrix::zeros(family.target_dim() * index_size, family.source_dim());
        for (alpha, u) in family.members().iter().enumerate() {
            w = &w + &u.kron(&ComplexMatrix::basis_column(index_size, alpha));
        }
        Ok(Self { w, index_size })
    }

    pub fn new(w: ComplexMatrix, index_size: usize) -> Result<Self> {
        if index_size == 0 || !w.rows().is_multiple_of(index_size) {
            return Err(Error::ShapeMismatch(format!(
                "{} rows cannot split over an index set of size {index_size}",
                w.rows()
            )));
        }
        Ok(Self { w, index_size })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.w
    }

    pub fn index_size(&self) -> usize {
        self.index_size
    }

    /// `dim H`.
    pub fn source_dim(&self) -> usize {
        self.w.cols()
    }

    /// `dim K`.
    pub fn target_dim(&self) -> usize {
        self.w.rows() / self.index_size
    }

    /// Component `(1 ⊗ ê_α*) w`, the `α`-th partial isometry.
    pub fn component(&self, alpha: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.target_dim(), self.source_dim(), |k, h| {
            self.w.get(k * self.index_size + alpha, h)
        })
    }

    /// The same isometry viewed in `K ⊗ ℓ²(I')` with `|I'| = len`, padding
    /// with zero components.
    pub fn padded(&self, len: usize) -> Result<Self> {
        if len < self.index_size {
            return Err(Error::InvalidInput("padding cannot shrink the index set".into()));
        }
        let k = self.target_dim();
        let mut w = ComplexMatrix::zeros(k * len, self.source_dim());
        for kk in 0..k {
            for alpha in 0..self.index_size {
                for h in 0..self.source_dim() {
                    w.set(kk * len + alpha, h, self.w.get(kk * self.index_size + alpha, h));
                }
            }
        }
        Ok(Self { w, index_size: len })
    }

    /// `b ⊗ 1_I`.
    pub fn amplify(&self, b: &ComplexMatrix) -> ComplexMatrix {
        b.kron(&ComplexMatrix::identity(self.index_size))
    }

    /// `||w* w - 1||_F`.
    pub fn isometry_residual(&self) -> f64 {
        (&self.w.adjoint() * &self.w).distance(&ComplexMatrix::identity(self.source_dim()))
    }

    /// `w* (b ⊗ 1) w`.
    pub fn compress(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if b.shape() != (self.target_dim(), self.target_dim()) {
            return Err(Error::ShapeMismatch("compressed operator has the wrong size".into()));
        }
        Ok(&(&self.w.adjoint() * &self.amplify(b)) * &self.w)
    }

    /// `Σ_α u_α* b u_α` on the family's side, which equals [`Self::compress`].
    pub fn family(&self) -> Result<PartialIsometryFamily> {
        let members = (0..self.index_size).map(|a| self.component(a)).collect();
        PartialIsometryFamily::new(self.source_dim(), self.target_dim(), members)
    }

    fn check_against(&self, pi: &Homomorphism) -> Result<()> {
        if self.source_dim() != pi.target().hilbert_dim() || self.target_dim() != pi.source().hilbert_dim() {
            return Err(Error::ShapeMismatch(format!(
                "isometry {}x{} does not fit a homomorphism from dimension {} into dimension {}",
                self.w.rows(),
                self.w.cols(),
                pi.source().hilbert_dim(),
                pi.target().hilbert_dim()
            )));
        }
        Ok(())
    }
}

/// Builds the dilation of `π` from the family extracted from `G(π)`.
pub fn dilation(pi: &Homomorphism, tol: &Tolerances) -> Result<DilationIsometry> {
    let relation = super::g_forward(pi, tol)?;
    let family = super::extract_family(&relation, tol)?;
    DilationIsometry::from_family(&family)
}

/// Largest `||(b ⊗ 1) w - w π(b)||_F` over the source basis.
pub fn intertwine_residual(w: &DilationIsometry, pi: &Homomorphism) -> Result<f64> {
    w.check_against(pi)?;
    let mut worst = 0.0f64;
    for (b, img) in pi.source().basis().iter().zip(pi.images()) {
        let lhs = &w.amplify(b) * &w.w;
        let rhs = &w.w * img;
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(worst)
}

/// `(b ⊗ 1) w = w π(b)` for every source basis element.
pub fn verify_intertwine(w: &DilationIsometry, pi: &Homomorphism, tol: &Tolerances) -> Result<bool> {
    Ok(intertwine_residual(w, pi)? <= tol.eq_tol)
}

/// Largest `||[w w*, b ⊗ 1]||_F`; zero means `w w*` lies in `(N ⊗ C)'`.
pub fn range_projection_residual(w: &DilationIsometry, pi: &Homomorphism) -> Result<f64> {
    w.check_against(pi)?;
    let proj = &w.w * &w.w.adjoint();
    Ok(pi
        .source()
        .basis()
        .iter()
        .map(|b| proj.commutator(&w.amplify(b)).frobenius_norm())
        .fold(0.0, f64::max))
}

/// Largest `||[w0 w1*, b ⊗ 1]||_F` after padding both to a common index set.
pub fn homotopy_residual(w0: &DilationIsometry, w1: &DilationIsometry, pi: &Homomorphism) -> Result<f64> {
    w0.check_against(pi)?;
    w1.check_against(pi)?;
    let len = w0.index_size.max(w1.index_size);
    let (w0, w1) = (w0.padded(len)?, w1.padded(len)?);
    let cross = &w0.w * &w1.w.adjoint();
    Ok(pi
        .source()
        .basis()
        .iter()
        .map(|b| cross.commutator(&w0.amplify(b)).frobenius_norm())
        .fold(0.0, f64::max))
}

/// `w0 w1* ∈ (N ⊗ C_L)'`.
pub fn verify_homotopy(w0: &DilationIsometry, w1: &DilationIsometry, pi: &Homomorphism, tol: &Tolerances) -> Result<bool> {
    Ok(homotopy_residual(w0, w1, pi)? <= tol.eq_tol)
}

/// Both sides of the generation identity
/// `(N ⊗ C_{ℓ²(I)})' w M' = V ⊗ B(C, ℓ²(I))`, built explicitly.
pub fn generation_sides(r: &QuantumRelation, w: &DilationIsometry, tol: &Tolerances) -> Result<(OperatorSubspace, OperatorSubspace)> {
    let (h, k) = (r.source().hilbert_dim(), r.target().hilbert_dim());
    if w.source_dim() != h || w.target_dim() != k {
        return Err(Error::ShapeMismatch("isometry does not match the relation's Hilbert spaces".into()));
    }
    let l = w.index_size;
    let kl = k * l;

    // (N ⊗ C)' = N' ⊗ B(ℓ²(I))
    let units = OperatorSubspace::full(l, l);
    let amplified_commutant: Vec<ComplexMatrix> = r
        .target()
        .commutant()
        .basis()
        .iter()
        .flat_map(|c| units.basis().iter().map(move |e| c.kron(e)))
        .collect();
    let left = OperatorSubspace::orthonormalize(kl, kl, &amplified_commutant, tol)?;
    let w_span = OperatorSubspace::orthonormalize(h, kl, [&w.w], tol)?;
    let lw = OperatorSubspace::product_span(&left, &w_span, tol)?;
    let lhs = OperatorSubspace::product_span(&lw, r.source().commutant(), tol)?;

    let tensors: Vec<ComplexMatrix> = r
        .space()
        .basis()
        .iter()
        .flat_map(|v| (0..l).map(move |a| v.kron(&ComplexMatrix::basis_column(l, a))))
        .collect();
    let rhs = OperatorSubspace::orthonormalize(h, kl, &tensors, tol)?;
    Ok((lhs, rhs))
}

pub fn verify_generation(r: &QuantumRelation, w: &DilationIsometry, tol: &Tolerances) -> Result<bool> {
    let (lhs, rhs) = generation_sides(r, w, tol)?;
    lhs.subspace_eq(&rhs, tol)
}

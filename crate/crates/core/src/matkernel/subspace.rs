use num_complex::Complex64;
use serde::Serialize;

use super::decomp::null_space_scaled;
use super::matrix::{hs_inner_unchecked, ComplexMatrix};
use super::tolerance::Tolerances;
use crate::error::{Error, Result};

/// A linear subspace of `B(H, K)` held as a Hilbert-Schmidt orthonormal basis.
///
/// Basis elements are `codomain_dim x domain_dim` matrices. In finite
/// dimension every span is already closed, so this is the ambient type for
/// every quantum relation.
#[derive(Debug, Clone, Serialize)]
pub struct OperatorSubspace {
    domain_dim: usize,
    codomain_dim: usize,
    basis: Vec<ComplexMatrix>,
}

impl OperatorSubspace {
    pub fn zero(domain_dim: usize, codomain_dim: usize) -> Self {
        Self {
            domain_dim,
            codomain_dim,
            basis: Vec::new(),
        }
    }

    /// All of `B(C^domain_dim, C^codomain_dim)`, spanned by matrix units in
    /// row-major order.
    pub fn full(domain_dim: usize, codomain_dim: usize) -> Self {
        let basis = (0..codomain_dim)
            .flat_map(|i| (0..domain_dim).map(move |j| ComplexMatrix::unit(codomain_dim, domain_dim, i, j)))
            .collect();
        Self {
            domain_dim,
            codomain_dim,
            basis,
        }
    }

    /// Orthonormal basis of the span of `vectors`.
    ///
    /// Modified Gram-Schmidt with a second orthogonalization pass. An input
    /// whose residual is at most `rank_tol` times the largest input norm is
    /// dropped; survivors keep their input order.
    pub fn orthonormalize<'a, I>(domain_dim: usize, codomain_dim: usize, vectors: I, tol: &Tolerances) -> Result<Self>
    where
        I: IntoIterator<Item = &'a ComplexMatrix>,
    {
        if domain_dim == 0 || codomain_dim == 0 {
            return Err(Error::ShapeMismatch("subspace dimensions must be positive".into()));
        }
        let vectors: Vec<&ComplexMatrix> = vectors.into_iter().collect();
        for v in &vectors {
            if v.shape() != (codomain_dim, domain_dim) {
                return Err(Error::ShapeMismatch(format!(
                    "expected {codomain_dim}x{domain_dim} element, got {}x{}",
                    v.rows(),
                    v.cols()
                )));
            }
        }
        let max_norm = vectors.iter().map(|v| v.frobenius_norm()).fold(0.0, f64::max);
        let cutoff = tol.rank_tol * max_norm;
        let capacity = domain_dim * codomain_dim;

        let mut basis: Vec<ComplexMatrix> = Vec::new();
        for v in vectors {
            if basis.len() == capacity {
                break;
            }
            let mut r = v.clone();
            for _pass in 0..2 {
                for q in &basis {
                    let coeff = hs_inner_unchecked(q, &r);
                    axpy(&mut r, -coeff, q);
                }
            }
            let norm = r.frobenius_norm();
            if norm > cutoff && norm > 0.0 {
                basis.push(r.scale_real(1.0 / norm));
            }
        }
        Ok(Self {
            domain_dim,
            codomain_dim,
            basis,
        })
    }

    /// Wraps a basis the caller already knows to be orthonormal.
    pub(crate) fn from_orthonormal_unchecked(domain_dim: usize, codomain_dim: usize, basis: Vec<ComplexMatrix>) -> Self {
        Self {
            domain_dim,
            codomain_dim,
            basis,
        }
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    /// Matrix shape of the elements, `(codomain_dim, domain_dim)`.
    pub fn element_shape(&self) -> (usize, usize) {
        (self.codomain_dim, self.domain_dim)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    fn check_element(&self, m: &ComplexMatrix) -> Result<()> {
        if m.shape() != self.element_shape() {
            return Err(Error::ShapeMismatch(format!(
                "subspace of {}x{} matrices cannot hold a {}x{} matrix",
                self.codomain_dim,
                self.domain_dim,
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }

    fn check_same_ambient(&self, other: &Self) -> Result<()> {
        if self.element_shape() != other.element_shape() {
            return Err(Error::ShapeMismatch(format!(
                "subspaces of {:?} and {:?} matrices",
                self.element_shape(),
                other.element_shape()
            )));
        }
        Ok(())
    }

    /// Coefficients `<b_i, m>` of `m` against the basis.
    pub fn coefficients(&self, m: &ComplexMatrix) -> Result<Vec<Complex64>> {
        self.check_element(m)?;
        Ok(self.basis.iter().map(|b| hs_inner_unchecked(b, m)).collect())
    }

    /// Orthogonal projection of `m` onto the subspace.
    pub fn project(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let coeffs = self.coefficients(m)?;
        let mut out = ComplexMatrix::zeros(self.codomain_dim, self.domain_dim);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            axpy(&mut out, *c, b);
        }
        Ok(out)
    }

    /// `||m - P m||_F / max(1, ||m||_F)`.
    pub fn relative_residual(&self, m: &ComplexMatrix) -> Result<f64> {
        let p = self.project(m)?;
        Ok(m.distance(&p) / m.frobenius_norm().max(1.0))
    }

    pub fn contains(&self, m: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
        Ok(self.relative_residual(m)? <= tol.membership_tol)
    }

    /// Largest relative residual of `other`'s basis outside `self`; zero when
    /// `other` is the zero subspace.
    pub fn max_residual_of(&self, other: &Self) -> Result<f64> {
        self.check_same_ambient(other)?;
        other
            .basis
            .iter()
            .map(|b| self.relative_residual(b))
            .try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
    }

    /// `self ⊆ other`.
    pub fn leq(&self, other: &Self, tol: &Tolerances) -> Result<bool> {
        Ok(other.max_residual_of(self)? <= tol.membership_tol)
    }

    pub fn subspace_eq(&self, other: &Self, tol: &Tolerances) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.leq(other, tol)? && other.leq(self, tol)?)
    }

    /// Span of the union of two bases.
    pub fn sum(&self, other: &Self, tol: &Tolerances) -> Result<Self> {
        self.check_same_ambient(other)?;
        Self::orthonormalize(self.domain_dim, self.codomain_dim, self.basis.iter().chain(&other.basis), tol)
    }

    /// Matrix of the orthogonal projection acting on row-major coordinates.
    pub fn coordinate_projector(&self) -> ComplexMatrix {
        let n = self.domain_dim * self.codomain_dim;
        let mut p = ComplexMatrix::zeros(n, n);
        for b in &self.basis {
            let d = b.data();
            for k in 0..n {
                if d[k] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for l in 0..n {
                    p.set(k, l, p.get(k, l) + d[k] * d[l].conj());
                }
            }
        }
        p
    }

    /// Intersection, computed as the kernel of `[I - P_a; I - P_b]` on
    /// coordinates.
    pub fn intersect(&self, other: &Self, tol: &Tolerances) -> Result<Self> {
        self.check_same_ambient(other)?;
        let n = self.domain_dim * self.codomain_dim;
        let id = ComplexMatrix::identity(n);
        let stacked = ComplexMatrix::vstack(&[&id - &self.coordinate_projector(), &id - &other.coordinate_projector()])?;
        let kernel = null_space_scaled(&stacked, 1.0, tol)?;
        let elements: Vec<ComplexMatrix> = kernel
            .basis()
            .iter()
            .map(|x| x.reshape(self.codomain_dim, self.domain_dim))
            .collect::<Result<_>>()?;
        Self::orthonormalize(self.domain_dim, self.codomain_dim, &elements, tol)
    }

    /// Span of all products `a_i b_j`; requires `a.domain_dim == b.codomain_dim`.
    pub fn product_span(a: &Self, b: &Self, tol: &Tolerances) -> Result<Self> {
        if a.domain_dim != b.codomain_dim {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose subspaces: left acts on dimension {}, right lands in dimension {}",
                a.domain_dim, b.codomain_dim
            )));
        }
        let products: Vec<ComplexMatrix> = a
            .basis
            .iter()
            .flat_map(|x| b.basis.iter().map(move |y| x * y))
            .collect();
        Self::orthonormalize(b.domain_dim, a.codomain_dim, &products, tol)
    }

    /// Span of the adjoints.
    pub fn adjoint(&self, tol: &Tolerances) -> Result<Self> {
        let adj: Vec<ComplexMatrix> = self.basis.iter().map(ComplexMatrix::adjoint).collect();
        Self::orthonormalize(self.codomain_dim, self.domain_dim, &adj, tol)
    }

    /// Span of `x * s * y` over all basis elements `s`.
    pub fn sandwich(&self, left: &ComplexMatrix, right: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if left.cols() != self.codomain_dim || right.rows() != self.domain_dim {
            return Err(Error::ShapeMismatch("sandwich factors do not fit".into()));
        }
        let images: Vec<ComplexMatrix> = self.basis.iter().map(|s| &(left * s) * right).collect();
        Self::orthonormalize(right.cols(), left.rows(), &images, tol)
    }

    /// Same subspace with the basis reordered; `order` must be a permutation
    /// of `0..dim`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.dim()];
        for &i in order {
            if i >= self.dim() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput("basis order is not a permutation".into()));
            }
        }
        if order.len() != self.dim() {
            return Err(Error::InvalidInput("basis order is not a permutation".into()));
        }
        Ok(Self {
            domain_dim: self.domain_dim,
            codomain_dim: self.codomain_dim,
            basis: order.iter().map(|&i| self.basis[i].clone()).collect(),
        })
    }

    /// Largest `|<b_i, b_j> - delta_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((hs_inner_unchecked(a, b) - target).norm());
            }
        }
        worst
    }
}

/// `y += a * x`.
pub(crate) fn axpy(y: &mut ComplexMatrix, a: Complex64, x: &ComplexMatrix) {
    let (rows, cols) = y.shape();
    for i in 0..rows {
        for j in 0..cols {
            y.set(i, j, y.get(i, j) + a * x.get(i, j));
        }
    }
}

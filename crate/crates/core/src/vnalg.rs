//! Finite-dimensional von Neumann algebras and commutants.
//!
//! Every such algebra is unitarily a direct sum of blocks `M_n ⊗ 1_m`. The
//! structured constructor [`VonNeumannAlgebra::from_blocks`] builds that form
//! with exact bases; [`VonNeumannAlgebra::from_generators`] handles arbitrary
//! generator lists numerically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkernel::{null_space_scaled, ComplexMatrix, OperatorSubspace, Tolerances};

/// One summand `C^n ⊗ C^m`: a full `n x n` matrix block with multiplicity `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub blocks: Vec<Block>,
}

impl BlockSpec {
    pub fn new(blocks: &[(usize, usize)]) -> Self {
        Self {
            blocks: blocks.iter().map(|&(n, m)| Block { n, m }).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidInput("block list is empty".into()));
        }
        if let Some(b) = self.blocks.iter().find(|b| b.n == 0 || b.m == 0) {
            return Err(Error::InvalidInput(format!(
                "block sizes and multiplicities must be positive, got n={} m={}",
                b.n, b.m
            )));
        }
        Ok(())
    }

    pub fn hilbert_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.n * b.m).sum()
    }

    /// Offset of each block inside the direct sum.
    pub fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, b| {
                let start = *acc;
                *acc += b.n * b.m;
                Some(start)
            })
            .collect()
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.blocks.iter().map(|b| format!("M{}⊗1{}", b.n, b.m)).collect();
        parts.join(" ⊕ ")
    }
}

/// A unital *-subalgebra of `B(C^hilbert_dim)` together with its commutant.
#[derive(Debug, Clone, Serialize)]
pub struct VonNeumannAlgebra {
    hilbert_dim: usize,
    algebra: OperatorSubspace,
    commutant: OperatorSubspace,
    label: Option<String>,
}

fn embed(block: &ComplexMatrix, offset: usize, dim: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            out.set(offset + i, offset + j, block.get(i, j));
        }
    }
    out
}

fn check_square(generators: &[ComplexMatrix], dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidInput("Hilbert dimension must be positive".into()));
    }
    if let Some(g) = generators.iter().find(|g| g.shape() != (dim, dim)) {
        return Err(Error::ShapeMismatch(format!(
            "generator is {}x{}, expected {dim}x{dim}",
            g.rows(),
            g.cols()
        )));
    }
    Ok(())
}

/// Orthonormal basis of `{X : [X, g] = 0 and [X, g*] = 0 for every generator}`.
pub fn commutant_of(generators: &[ComplexMatrix], dim: usize, tol: &Tolerances) -> Result<OperatorSubspace> {
    check_square(generators, dim)?;
    if generators.is_empty() {
        return Ok(OperatorSubspace::full(dim, dim));
    }
    let constraints: Vec<ComplexMatrix> = generators.iter().flat_map(|g| [g.clone(), g.adjoint()]).collect();

    // column k is the stacked commutators of the k-th matrix unit
    let n = dim * dim;
    let block = n;
    let mut map = ComplexMatrix::zeros(block * constraints.len(), n);
    for k in 0..n {
        let unit = ComplexMatrix::unit(dim, dim, k / dim, k % dim);
        for (c, g) in constraints.iter().enumerate() {
            let comm = unit.commutator(g);
            for (row, z) in comm.data().iter().enumerate() {
                map.set(c * block + row, k, *z);
            }
        }
    }
    let scale = constraints.iter().map(ComplexMatrix::frobenius_norm).fold(0.0, f64::max);
    let kernel = null_space_scaled(&map, scale, tol)?;
    let elements: Vec<ComplexMatrix> = kernel
        .basis()
        .iter()
        .map(|x| x.reshape(dim, dim))
        .collect::<Result<_>>()?;
    OperatorSubspace::orthonormalize(dim, dim, &elements, tol)
}

impl VonNeumannAlgebra {
    /// `⊕_i M_{n_i} ⊗ 1_{m_i}` on `⊕_i C^{n_i} ⊗ C^{m_i}`.
    ///
    /// Algebra basis: normalized `E_rs ⊗ 1_m` per block, blocks in order,
    /// `(r, s)` row-major. Commutant basis: normalized `1_n ⊗ E_ab` likewise.
    pub fn from_blocks(spec: &BlockSpec) -> Result<Self> {
        spec.validate()?;
        let dim = spec.hilbert_dim();
        let mut algebra = Vec::new();
        let mut commutant = Vec::new();
        for (block, offset) in spec.blocks.iter().zip(spec.offsets()) {
            let (n, m) = (block.n, block.m);
            let id_n = ComplexMatrix::identity(n);
            let id_m = ComplexMatrix::identity(m);
            for r in 0..n {
                for s in 0..n {
                    let unit = ComplexMatrix::unit(n, n, r, s).kron(&id_m).scale_real(1.0 / (m as f64).sqrt());
                    algebra.push(embed(&unit, offset, dim));
                }
            }
            for a in 0..m {
                for b in 0..m {
                    let unit = id_n.kron(&ComplexMatrix::unit(m, m, a, b)).scale_real(1.0 / (n as f64).sqrt());
                    commutant.push(embed(&unit, offset, dim));
                }
            }
        }
        Ok(Self {
            hilbert_dim: dim,
            algebra: OperatorSubspace::from_orthonormal_unchecked(dim, dim, algebra),
            commutant: OperatorSubspace::from_orthonormal_unchecked(dim, dim, commutant),
            label: Some(spec.label()),
        })
    }

    /// The unital *-algebra generated by `generators`.
    ///
    /// Starts from the span of the identity, the generators and their
    /// adjoints, then closes under products until the dimension stops
    /// growing. The commutant is computed numerically and the double
    /// commutant is checked against the result.
    pub fn from_generators(generators: &[ComplexMatrix], dim: usize, tol: &Tolerances) -> Result<Self> {
        check_square(generators, dim)?;
        let mut seed = vec![ComplexMatrix::identity(dim)];
        seed.extend(generators.iter().cloned());
        seed.extend(generators.iter().map(ComplexMatrix::adjoint));
        let mut algebra = OperatorSubspace::orthonormalize(dim, dim, &seed, tol)?;

        let mut converged = false;
        for _ in 0..dim * dim {
            let products = OperatorSubspace::product_span(&algebra, &algebra, tol)?;
            let grown = algebra.sum(&products, tol)?;
            if grown.dim() == algebra.dim() {
                converged = true;
                break;
            }
            algebra = grown;
        }
        if !converged {
            return Err(Error::Numerical("generated algebra did not stabilize".into()));
        }

        let commutant = commutant_of(algebra.basis(), dim, tol)?;
        let out = Self {
            hilbert_dim: dim,
            algebra,
            commutant,
            label: None,
        };
        let residual = out.double_commutant_residual(tol)?;
        if residual > tol.membership_tol {
            return Err(Error::Numerical(format!(
                "double commutant differs from the generated algebra (residual {residual:.3e})"
            )));
        }
        Ok(out)
    }

    /// `u A u*` for a unitary `u`.
    pub fn conjugated(&self, u: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if u.shape() != (self.hilbert_dim, self.hilbert_dim) {
            return Err(Error::ShapeMismatch("conjugating unitary has the wrong size".into()));
        }
        let defect = (&u.adjoint() * u).distance(&ComplexMatrix::identity(self.hilbert_dim));
        if defect > tol.eq_tol {
            return Err(Error::InvalidInput(format!("conjugating matrix is not unitary (defect {defect:.3e})")));
        }
        let ua = u.adjoint();
        let conj = |s: &OperatorSubspace| {
            let basis = s.basis().iter().map(|b| &(u * b) * &ua).collect();
            OperatorSubspace::from_orthonormal_unchecked(self.hilbert_dim, self.hilbert_dim, basis)
        };
        Ok(Self {
            hilbert_dim: self.hilbert_dim,
            algebra: conj(&self.algebra),
            commutant: conj(&self.commutant),
            label: self.label.clone(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn algebra(&self) -> &OperatorSubspace {
        &self.algebra
    }

    pub fn commutant(&self) -> &OperatorSubspace {
        &self.commutant
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        self.algebra.basis()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn identity(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.hilbert_dim)
    }

    pub fn contains(&self, x: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
        self.algebra.contains(x, tol)
    }

    /// The center `A ∩ A'`.
    pub fn center(&self, tol: &Tolerances) -> Result<OperatorSubspace> {
        self.algebra.intersect(&self.commutant, tol)
    }

    /// Same Hilbert space and same algebra as subspaces.
    pub fn same_algebra(&self, other: &Self, tol: &Tolerances) -> Result<bool> {
        Ok(self.hilbert_dim == other.hilbert_dim && self.algebra.subspace_eq(&other.algebra, tol)?)
    }

    /// Whether every basis element is diagonal, i.e. the algebra sits inside
    /// `ℓ∞` of the standard basis.
    pub fn is_diagonal(&self, tol: &Tolerances) -> bool {
        self.algebra.basis().iter().all(|b| b.is_diagonal(tol.eq_tol))
    }

    /// Largest `||[a, c]||_F` over algebra and commutant basis pairs.
    pub fn commutation_residual(&self) -> f64 {
        self.algebra
            .basis()
            .iter()
            .flat_map(|a| self.commutant.basis().iter().map(move |c| a.commutator(c).frobenius_norm()))
            .fold(0.0, f64::max)
    }

    /// Relative residual between `commutant_of(commutant)` and the algebra,
    /// in both directions; infinite when the dimensions disagree.
    pub fn double_commutant_residual(&self, tol: &Tolerances) -> Result<f64> {
        let bicommutant = commutant_of(self.commutant.basis(), self.hilbert_dim, tol)?;
        if bicommutant.dim() != self.algebra.dim() {
            return Ok(f64::INFINITY);
        }
        Ok(self
            .algebra
            .max_residual_of(&bicommutant)?
            .max(bicommutant.max_residual_of(&self.algebra)?))
    }

    /// Checks unit, *-closure, product closure, commutation and the double
    /// commutant identity.
    pub fn check(&self, tol: &Tolerances) -> Result<()> {
        let id = self.identity();
        if !self.algebra.contains(&id, tol)? || !self.commutant.contains(&id, tol)? {
            return Err(Error::InvalidInput("algebra or commutant misses the identity".into()));
        }
        for a in self.algebra.basis() {
            if !self.algebra.contains(&a.adjoint(), tol)? {
                return Err(Error::InvalidInput("algebra is not closed under adjoints".into()));
            }
            for b in self.algebra.basis() {
                if !self.algebra.contains(&(a * b), tol)? {
                    return Err(Error::InvalidInput("algebra is not closed under products".into()));
                }
            }
        }
        let comm = self.commutation_residual();
        if comm > tol.eq_tol {
            return Err(Error::InvalidInput(format!(
                "algebra and commutant fail to commute (residual {comm:.3e})"
            )));
        }
        let dc = self.double_commutant_residual(tol)?;
        if dc > tol.membership_tol {
            return Err(Error::InvalidInput(format!("double commutant mismatch (residual {dc:.3e})")));
        }
        Ok(())
    }
}

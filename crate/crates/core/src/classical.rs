//! Finite sets as diagonal algebras.
//!
//! A relation `F ⊆ Y × X` becomes the span of the matrix units `E_yx` in
//! `B(C^X, C^Y)`, a quantum relation from `ℓ∞(X)` to `ℓ∞(Y)`. A function
//! `f: X -> Y` becomes the pullback `g ↦ g ∘ f` from `ℓ∞(Y)` to `ℓ∞(X)`.
//! Pairs are stored as `(y, x)`, 0-based.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkernel::{ComplexMatrix, OperatorSubspace, Tolerances};
use crate::qfun::Homomorphism;
use crate::qrel::{QuantumRelation, RelationProperties};
use crate::vnalg::{BlockSpec, VonNeumannAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalRelation {
    pub x_size: usize,
    pub y_size: usize,
    pub pairs: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalFunction {
    pub x_size: usize,
    pub y_size: usize,
    pub map: Vec<usize>,
}

impl ClassicalRelation {
    pub fn new(x_size: usize, y_size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let rel = Self {
            x_size,
            y_size,
            pairs: pairs.into_iter().collect(),
        };
        rel.validate()?;
        Ok(rel)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x_size == 0 || self.y_size == 0 {
            return Err(Error::InvalidInput("set sizes must be positive".into()));
        }
        if let Some(&(y, x)) = self.pairs.iter().find(|&&(y, x)| y >= self.y_size || x >= self.x_size) {
            return Err(Error::InvalidInput(format!(
                "pair ({y}, {x}) out of range for {}x{}",
                self.y_size, self.x_size
            )));
        }
        Ok(())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            x_size: n,
            y_size: n,
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn full(x_size: usize, y_size: usize) -> Self {
        Self {
            x_size,
            y_size,
            pairs: (0..y_size).flat_map(|y| (0..x_size).map(move |x| (y, x))).collect(),
        }
    }

    /// Relation whose pairs are the set bits of `mask`, bit `y * x_size + x`.
    pub fn from_mask(x_size: usize, y_size: usize, mask: u64) -> Self {
        Self {
            x_size,
            y_size,
            pairs: (0..y_size)
                .flat_map(|y| (0..x_size).map(move |x| (y, x)))
                .filter(|&(y, x)| mask >> (y * x_size + x) & 1 == 1)
                .collect(),
        }
    }

    /// Every relation between sets of the given sizes.
    pub fn enumerate(x_size: usize, y_size: usize) -> impl Iterator<Item = Self> {
        let bits = x_size * y_size;
        assert!(bits < 64, "too many pairs to enumerate");
        (0..1u64 << bits).map(move |mask| Self::from_mask(x_size, y_size, mask))
    }

    pub fn contains(&self, y: usize, x: usize) -> bool {
        self.pairs.contains(&(y, x))
    }

    pub fn inverse(&self) -> Self {
        Self {
            x_size: self.y_size,
            y_size: self.x_size,
            pairs: self.pairs.iter().map(|&(y, x)| (x, y)).collect(),
        }
    }

    /// `self ∘ inner = {(z, x) : ∃ y, (z, y) ∈ self, (y, x) ∈ inner}`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.x_size != inner.y_size {
            return Err(Error::ShapeMismatch("relations do not compose".into()));
        }
        let pairs = self
            .pairs
            .iter()
            .flat_map(|&(z, y)| inner.pairs.iter().filter(move |&&(y2, _)| y2 == y).map(move |&(_, x)| (z, x)))
            .collect();
        Ok(Self {
            x_size: inner.x_size,
            y_size: self.y_size,
            pairs,
        })
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Each `x` relates to exactly one `y`.
    pub fn as_function(&self) -> Option<ClassicalFunction> {
        let mut map = vec![None; self.x_size];
        for &(y, x) in &self.pairs {
            if map[x].replace(y).is_some() {
                return None;
            }
        }
        let map = map.into_iter().collect::<Option<Vec<_>>>()?;
        Some(ClassicalFunction {
            x_size: self.x_size,
            y_size: self.y_size,
            map,
        })
    }
}

impl ClassicalFunction {
    pub fn new(x_size: usize, y_size: usize, map: Vec<usize>) -> Result<Self> {
        let f = Self { x_size, y_size, map };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x_size == 0 || self.y_size == 0 {
            return Err(Error::InvalidInput("set sizes must be positive".into()));
        }
        if self.map.len() != self.x_size {
            return Err(Error::InvalidInput(format!(
                "function on {} points has {} values",
                self.x_size,
                self.map.len()
            )));
        }
        if let Some(&y) = self.map.iter().find(|&&y| y >= self.y_size) {
            return Err(Error::InvalidInput(format!("value {y} out of range {}", self.y_size)));
        }
        Ok(())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            x_size: n,
            y_size: n,
            map: (0..n).collect(),
        }
    }

    /// Every function between sets of the given sizes, in lexicographic order.
    pub fn enumerate(x_size: usize, y_size: usize) -> impl Iterator<Item = Self> {
        let count = (y_size as u64).pow(x_size as u32);
        (0..count).map(move |mut code| {
            let mut map = vec![0; x_size];
            for slot in map.iter_mut().rev() {
                *slot = (code % y_size as u64) as usize;
                code /= y_size as u64;
            }
            Self { x_size, y_size, map }
        })
    }

    pub fn graph(&self) -> ClassicalRelation {
        ClassicalRelation {
            x_size: self.x_size,
            y_size: self.y_size,
            pairs: self.map.iter().enumerate().map(|(x, &y)| (y, x)).collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.x_size != inner.y_size {
            return Err(Error::ShapeMismatch("functions do not compose".into()));
        }
        Ok(Self {
            x_size: inner.x_size,
            y_size: self.y_size,
            map: inner.map.iter().map(|&y| self.map[y]).collect(),
        })
    }
}

/// `ℓ∞(n)`: all diagonal `n x n` matrices, equal to its own commutant.
pub fn diag_algebra(n: usize) -> Result<VonNeumannAlgebra> {
    if n == 0 {
        return Err(Error::InvalidInput("diagonal algebra needs at least one point".into()));
    }
    Ok(VonNeumannAlgebra::from_blocks(&BlockSpec::new(&vec![(1, 1); n]))?.with_label(format!("ℓ∞({n})")))
}

/// The span of `{E_yx : (y, x) ∈ F}` from `ℓ∞(X)` to `ℓ∞(Y)`.
pub fn relation_to_quantum(f: &ClassicalRelation, tol: &Tolerances) -> Result<QuantumRelation> {
    f.validate()?;
    let units: Vec<ComplexMatrix> = f
        .pairs
        .iter()
        .map(|&(y, x)| ComplexMatrix::unit(f.y_size, f.x_size, y, x))
        .collect();
    let space = OperatorSubspace::orthonormalize(f.x_size, f.y_size, &units, tol)?;
    QuantumRelation::new(diag_algebra(f.x_size)?, diag_algebra(f.y_size)?, space)
}

fn require_diagonal(a: &VonNeumannAlgebra, what: &str, tol: &Tolerances) -> Result<()> {
    if !a.is_diagonal(tol) {
        return Err(Error::NonDiagonal(format!("{what} algebra has off-diagonal elements")));
    }
    Ok(())
}

/// Reads a relation off a quantum relation between diagonal algebras:
/// `(y, x)` is a pair iff `E_yx` lies in the space.
pub fn quantum_to_relation(r: &QuantumRelation, tol: &Tolerances) -> Result<ClassicalRelation> {
    require_diagonal(r.source(), "source", tol)?;
    require_diagonal(r.target(), "target", tol)?;
    let (x_size, y_size) = (r.source().hilbert_dim(), r.target().hilbert_dim());
    let mut pairs = BTreeSet::new();
    for y in 0..y_size {
        for x in 0..x_size {
            if r.space().contains(&ComplexMatrix::unit(y_size, x_size, y, x), tol)? {
                pairs.insert((y, x));
            }
        }
    }
    Ok(ClassicalRelation { x_size, y_size, pairs })
}

/// Pullback `ℓ∞(Y) -> ℓ∞(X)`: `E_y ↦ Σ_{f(x) = y} E_x`.
pub fn function_to_hom(f: &ClassicalFunction) -> Result<Homomorphism> {
    f.validate()?;
    let source = diag_algebra(f.y_size)?;
    let target = diag_algebra(f.x_size)?;
    let images = (0..f.y_size)
        .map(|y| ComplexMatrix::from_fn(f.x_size, f.x_size, |i, j| {
            if i == j && f.map[i] == y {
                num_complex::Complex64::new(1.0, 0.0)
            } else {
                num_complex::Complex64::new(0.0, 0.0)
            }
        }))
        .collect();
    Homomorphism::new(source, target, images)
}

/// Recovers `f` from a pullback: `f(x)` is the unique `y` with
/// `<x| π(E_y) |x> = 1`.
pub fn hom_to_function(pi: &Homomorphism, tol: &Tolerances) -> Result<ClassicalFunction> {
    require_diagonal(pi.source(), "source", tol)?;
    require_diagonal(pi.target(), "target", tol)?;
    let (y_size, x_size) = (pi.source().hilbert_dim(), pi.target().hilbert_dim());
    let diag_images: Vec<ComplexMatrix> = (0..y_size)
        .map(|y| pi.apply(&ComplexMatrix::unit(y_size, y_size, y, y)))
        .collect::<Result<_>>()?;
    let mut map = Vec::with_capacity(x_size);
    for x in 0..x_size {
        let mut found = None;
        for (y, img) in diag_images.iter().enumerate() {
            let value = img.get(x, x);
            if (value - 1.0).norm() <= tol.eq_tol {
                if found.replace(y).is_some() {
                    return Err(Error::InvalidHomomorphism(format!("point {x} has several images")));
                }
            } else if value.norm() > tol.eq_tol {
                return Err(Error::InvalidHomomorphism(format!(
                    "<{x}|π(E_{y})|{x}> = {value} is neither 0 nor 1"
                )));
            }
        }
        map.push(found.ok_or_else(|| Error::InvalidHomomorphism(format!("point {x} has no image")))?);
    }
    ClassicalFunction::new(x_size, y_size, map)
}

/// Set-theoretic reflexive, symmetric, antisymmetric and transitive.
pub fn classical_predicates(f: &ClassicalRelation) -> Result<RelationProperties> {
    if f.x_size != f.y_size {
        return Err(Error::ShapeMismatch("relation properties need a relation on one set".into()));
    }
    let n = f.x_size;
    Ok(RelationProperties {
        reflexive: (0..n).all(|x| f.contains(x, x)),
        symmetric: f.pairs.iter().all(|&(y, x)| f.contains(x, y)),
        antisymmetric: f.pairs.iter().all(|&(y, x)| x == y || !f.contains(x, y)),
        transitive: f.compose(f)?.is_subset(f),
    })
}

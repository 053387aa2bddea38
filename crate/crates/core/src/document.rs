//! JSON input documents.
//!
//! Documents hold raw data only. Building turns them into checked objects:
//! subspace bases are re-orthonormalized and relation or homomorphism
//! validity is always recomputed, never read from the file.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkernel::{ComplexMatrix, OperatorSubspace, Tolerances};
use crate::qfun::{Homomorphism, PartialIsometryFamily};
use crate::qrel::QuantumRelation;
use crate::vnalg::{Block, BlockSpec, VonNeumannAlgebra};

/// `{"blocks": [{"n": 2, "m": 1}, ...]}` or `{"dim": d, "generators": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraDoc {
    Blocks {
        blocks: Vec<Block>,
    },
    Generators {
        dim: usize,
        generators: Vec<ComplexMatrix>,
    },
}

impl AlgebraDoc {
    pub fn build(&self, tol: &Tolerances) -> Result<VonNeumannAlgebra> {
        match self {
            AlgebraDoc::Blocks { blocks } => VonNeumannAlgebra::from_blocks(&BlockSpec { blocks: blocks.clone() }),
            AlgebraDoc::Generators { dim, generators } => VonNeumannAlgebra::from_generators(generators, *dim, tol),
        }
    }
}

impl From<&BlockSpec> for AlgebraDoc {
    fn from(spec: &BlockSpec) -> Self {
        AlgebraDoc::Blocks {
            blocks: spec.blocks.clone(),
        }
    }
}

/// Rebuilding from an algebra's own basis gives back the same algebra.
impl From<&VonNeumannAlgebra> for AlgebraDoc {
    fn from(m: &VonNeumannAlgebra) -> Self {
        AlgebraDoc::Generators {
            dim: m.hilbert_dim(),
            generators: m.basis().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceDoc {
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub basis: Vec<ComplexMatrix>,
}

impl SubspaceDoc {
    pub fn build(&self, tol: &Tolerances) -> Result<OperatorSubspace> {
        OperatorSubspace::orthonormalize(self.domain_dim, self.codomain_dim, &self.basis, tol)
    }
}

impl From<&OperatorSubspace> for SubspaceDoc {
    fn from(s: &OperatorSubspace) -> Self {
        Self {
            domain_dim: s.domain_dim(),
            codomain_dim: s.codomain_dim(),
            basis: s.basis().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub source: AlgebraDoc,
    pub target: AlgebraDoc,
    pub space: SubspaceDoc,
}

impl RelationDoc {
    /// Builds the relation without checking the bimodule property; callers
    /// decide whether an invalid relation is an error or a failed check.
    pub fn build(&self, tol: &Tolerances) -> Result<QuantumRelation> {
        let source = self.source.build(tol)?;
        let target = self.target.build(tol)?;
        let space = self.space.build(tol)?;
        QuantumRelation::new(source, target, space)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomDoc {
    pub source: AlgebraDoc,
    pub target: AlgebraDoc,
    pub images: Vec<ComplexMatrix>,
}

impl HomDoc {
    /// Builds the linear map. `images` must line up with the source basis as
    /// built from `source`; validation is left to the caller.
    pub fn build(&self, tol: &Tolerances) -> Result<Homomorphism> {
        let source = self.source.build(tol)?;
        let target = self.target.build(tol)?;
        if self.images.len() != source.dim() {
            return Err(Error::InvalidInput(format!(
                "{} images for a source algebra of dimension {}",
                self.images.len(),
                source.dim()
            )));
        }
        Homomorphism::new(source, target, self.images.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub members: Vec<ComplexMatrix>,
}

impl FamilyDoc {
    pub fn build(&self, source_dim: usize, target_dim: usize) -> Result<PartialIsometryFamily> {
        PartialIsometryFamily::new(source_dim, target_dim, self.members.clone())
    }
}

impl From<&PartialIsometryFamily> for FamilyDoc {
    fn from(f: &PartialIsometryFamily) -> Self {
        Self {
            members: f.members().to_vec(),
        }
    }
}

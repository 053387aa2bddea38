//! Seeded random instances: matrices, unitaries, block algebras in random
//! frames, and unital *-homomorphisms between them.
//!
//! A homomorphism `⊕_j M_{n_j} -> ⊕_i M_{p_i}` is determined up to unitary
//! twists by a multiplicity matrix `a_ij` with `Σ_j a_ij n_j = p_i`. The
//! generators here pick such a matrix, random twists, and random frames on
//! both Hilbert spaces.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matkernel::{ComplexMatrix, Tolerances};
use crate::qfun::Homomorphism;
use crate::vnalg::{Block, BlockSpec, VonNeumannAlgebra};

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    (&a + &a.adjoint()).scale_real(0.5)
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let qr = random_matrix(rng, n, n).to_faer().qr();
    let (q, r) = (qr.compute_Q(), qr.R());
    ComplexMatrix::from_fn(n, n, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

/// A block algebra `U (⊕ M_{n_j} ⊗ 1_{m_j}) U*` that remembers its frame.
#[derive(Debug, Clone)]
pub struct FramedAlgebra {
    pub spec: BlockSpec,
    pub frame: ComplexMatrix,
    pub algebra: VonNeumannAlgebra,
}

impl FramedAlgebra {
    pub fn new(spec: BlockSpec, frame: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let algebra = VonNeumannAlgebra::from_blocks(&spec)?.conjugated(&frame, tol)?;
        Ok(Self { spec, frame, algebra })
    }

    pub fn standard(spec: BlockSpec) -> Result<Self> {
        let frame = ComplexMatrix::identity(spec.hilbert_dim());
        let algebra = VonNeumannAlgebra::from_blocks(&spec)?;
        Ok(Self { spec, frame, algebra })
    }

    pub fn hilbert_dim(&self) -> usize {
        self.spec.hilbert_dim()
    }

    /// The `n_j x n_j` components `b_j` of `x = U (⊕ b_j ⊗ 1) U*`.
    pub fn components(&self, x: &ComplexMatrix) -> Vec<ComplexMatrix> {
        let y = &(&self.frame.adjoint() * x) * &self.frame;
        self.spec
            .blocks
            .iter()
            .zip(self.spec.offsets())
            .map(|(b, o)| ComplexMatrix::from_fn(b.n, b.n, |r, s| y.get(o + r * b.m, o + s * b.m)))
            .collect()
    }

    /// `U (⊕ c_j ⊗ 1_{m_j}) U*`.
    pub fn assemble(&self, components: &[ComplexMatrix]) -> ComplexMatrix {
        let blocks: Vec<ComplexMatrix> = components
            .iter()
            .zip(&self.spec.blocks)
            .map(|(c, b)| c.kron(&ComplexMatrix::identity(b.m)))
            .collect();
        &(&self.frame * &ComplexMatrix::direct_sum(&blocks)) * &self.frame.adjoint()
    }
}

/// Structure data behind a random homomorphism.
#[derive(Debug, Clone)]
pub struct HomStructure {
    /// `multiplicities[i][j]`: copies of source block `j` inside target block `i`.
    pub multiplicities: Vec<Vec<usize>>,
    /// One unitary per target block, of size `p_i`.
    pub twists: Vec<ComplexMatrix>,
}

#[derive(Debug, Clone)]
pub struct RandomHom {
    pub source: FramedAlgebra,
    pub target: FramedAlgebra,
    pub structure: HomStructure,
    pub hom: Homomorphism,
}

/// Evaluates the structured map on an element of `source`.
pub fn apply_structure(source: &FramedAlgebra, target: &FramedAlgebra, st: &HomStructure, x: &ComplexMatrix) -> ComplexMatrix {
    let parts = source.components(x);
    let target_components: Vec<ComplexMatrix> = st
        .multiplicities
        .iter()
        .zip(&st.twists)
        .map(|(row, twist)| {
            let copies: Vec<ComplexMatrix> = row
                .iter()
                .zip(&parts)
                .filter(|(a, _)| **a > 0)
                .map(|(a, b)| b.kron(&ComplexMatrix::identity(*a)))
                .collect();
            &(twist * &ComplexMatrix::direct_sum(&copies)) * &twist.adjoint()
        })
        .collect();
    target.assemble(&target_components)
}

fn random_spec<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> BlockSpec {
    loop {
        let count = rng.random_range(1..=3);
        let blocks: Vec<Block> = (0..count)
            .map(|_| Block {
                n: rng.random_range(1..=3),
                m: rng.random_range(1..=2),
            })
            .collect();
        let spec = BlockSpec { blocks };
        if spec.hilbert_dim() <= max_dim.max(1) {
            return spec;
        }
    }
}

fn random_frame<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    if rng.random_range(0..3) == 0 {
        ComplexMatrix::identity(n)
    } else {
        random_unitary(rng, n)
    }
}

/// Random block algebra of dimension at most `max_dim`, in a random frame
/// (the standard frame one time in three).
pub fn random_algebra<R: Rng + ?Sized>(rng: &mut R, max_dim: usize, tol: &Tolerances) -> Result<FramedAlgebra> {
    let spec = random_spec(rng, max_dim);
    let frame = random_frame(rng, spec.hilbert_dim());
    FramedAlgebra::new(spec, frame, tol)
}

/// All rows `a` with `Σ_j a_j n_j = p`.
fn compositions(sizes: &[usize], p: usize) -> Vec<Vec<usize>> {
    fn go(sizes: &[usize], p: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match sizes.split_first() {
            None => {
                if p == 0 {
                    out.push(prefix.clone());
                }
            }
            Some((&n, rest)) => {
                for a in 0..=p / n {
                    prefix.push(a);
                    go(rest, p - a * n, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(sizes, p, &mut Vec::new(), &mut out);
    out
}

fn random_twists<R: Rng + ?Sized>(rng: &mut R, target: &BlockSpec) -> Vec<ComplexMatrix> {
    target.blocks.iter().map(|b| random_unitary(rng, b.n)).collect()
}

fn random_target_shape<R: Rng + ?Sized>(rng: &mut R, source: &BlockSpec, max_dim: usize) -> (BlockSpec, Vec<Vec<usize>>) {
    let sizes: Vec<usize> = source.blocks.iter().map(|b| b.n).collect();
    for _ in 0..1000 {
        let count = rng.random_range(1..=3);
        let mut blocks = Vec::new();
        let mut mult = Vec::new();
        for _ in 0..count {
            let row: Vec<usize> = sizes.iter().map(|_| rng.random_range(0..=2)).collect();
            let p: usize = row.iter().zip(&sizes).map(|(a, n)| a * n).sum();
            if p == 0 {
                continue;
            }
            blocks.push(Block {
                n: p,
                m: rng.random_range(1..=2),
            });
            mult.push(row);
        }
        let spec = BlockSpec { blocks };
        if !spec.blocks.is_empty() && spec.hilbert_dim() <= max_dim {
            return (spec, mult);
        }
    }
    // one copy of the smallest source block always fits
    let (j, &n) = sizes.iter().enumerate().min_by_key(|(_, n)| **n).expect("nonempty spec");
    let mut row = vec![0; sizes.len()];
    row[j] = 1;
    (BlockSpec::new(&[(n, 1)]), vec![row])
}

fn build(source: &FramedAlgebra, target: FramedAlgebra, structure: HomStructure) -> Result<RandomHom> {
    let hom = Homomorphism::from_fn(source.algebra.clone(), target.algebra.clone(), |b| {
        apply_structure(source, &target, &structure, b)
    })?;
    Ok(RandomHom {
        source: source.clone(),
        target,
        structure,
        hom,
    })
}

/// Random unital *-homomorphism out of `source` into a random block algebra
/// on a space of dimension at most `max_dim`.
pub fn random_hom_from<R: Rng + ?Sized>(
    rng: &mut R,
    source: &FramedAlgebra,
    max_dim: usize,
    tol: &Tolerances,
) -> Result<RandomHom> {
    let (spec, multiplicities) = random_target_shape(rng, &source.spec, max_dim.max(1));
    let twists = random_twists(rng, &spec);
    let frame = random_frame(rng, spec.hilbert_dim());
    let target = FramedAlgebra::new(spec, frame, tol)?;
    build(source, target, HomStructure { multiplicities, twists })
}

/// Random homomorphism between random block algebras, both on spaces of
/// dimension at most `max_dim`.
pub fn random_hom<R: Rng + ?Sized>(rng: &mut R, max_dim: usize, tol: &Tolerances) -> Result<RandomHom> {
    let source = random_algebra(rng, max_dim, tol)?;
    random_hom_from(rng, &source, max_dim, tol)
}

/// Two homomorphisms between the same pair of algebras whose images differ
/// by more than `1e-3` on some basis element. Gives up with an error when
/// none turns up, e.g. for `max_dim = 1` where every algebra is `C`.
pub fn random_distinct_pair<R: Rng + ?Sized>(
    rng: &mut R,
    max_dim: usize,
    tol: &Tolerances,
) -> Result<(RandomHom, RandomHom)> {
    for _ in 0..64 {
        let first = random_hom(rng, max_dim, tol)?;
        let sizes: Vec<usize> = first.source.spec.blocks.iter().map(|b| b.n).collect();
        for _ in 0..8 {
            let multiplicities: Vec<Vec<usize>> = first
                .target
                .spec
                .blocks
                .iter()
                .map(|b| {
                    let options = compositions(&sizes, b.n);
                    options[rng.random_range(0..options.len())].clone()
                })
                .collect();
            let twists = random_twists(rng, &first.target.spec);
            let second = build(&first.source, first.target.clone(), HomStructure { multiplicities, twists })?;
            if first.hom.distance(&second.hom, tol)? > 1e-3 {
                return Ok((first, second));
            }
        }
    }
    Err(Error::InvalidInput(format!(
        "no two distinct homomorphisms found on dimension <= {max_dim}"
    )))
}

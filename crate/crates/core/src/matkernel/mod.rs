//! Dense complex linear algebra and arithmetic on spaces of operators.

mod decomp;
mod matrix;
mod subspace;
mod tolerance;

pub use decomp::{null_space, null_space_scaled, numerical_rank, polar_partial_isometry, svd, Polar, Svd};
pub use matrix::{check_same_shape, hs_inner, kron, ComplexMatrix};
pub use subspace::OperatorSubspace;
pub use tolerance::Tolerances;

pub(crate) use subspace::axpy;

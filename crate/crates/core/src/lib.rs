//! Finite-dimensional quantum relations and quantum functions.
//!
//! A quantum relation between von Neumann algebras `M ⊆ B(H)` and
//! `N ⊆ B(K)` is a subspace `V ⊆ B(H, K)` with `N' V M' ⊆ V`. Quantum
//! functions are the relations with `M' ⊆ V*V` and `VV* ⊆ N'`, and they are
//! in bijection with unital *-homomorphisms `N -> M`:
//!
//! * [`qfun::g_forward`] sends `π` to `{v : b v = v π(b) for all b ∈ N}`;
//! * [`qfun::g_inverse`] sends `V` to `b ↦ Σ u_α* b u_α` for a family of
//!   partial isometries in `V` built by [`qfun::extract_family`].
//!
//! The correspondence reverses composition. [`classical`] embeds finite sets,
//! relations and functions as diagonal algebras, where every construction can
//! be checked by enumeration.
//!
//! Orientation: a classical function `f: X -> Y` corresponds to the pullback
//! homomorphism `ℓ∞(Y) -> ℓ∞(X)` and to a quantum function from `ℓ∞(X)` to
//! `ℓ∞(Y)`.

pub mod classical;
pub mod document;
pub mod error;
pub mod matkernel;
pub mod qfun;
pub mod qrel;
pub mod sample;
pub mod vnalg;

pub use error::{Error, Result};
pub use matkernel::{ComplexMatrix, OperatorSubspace, Tolerances};

//! Exact computer algebra for the Chari-Pressley-Loktev (CPL) bases of the
//! local Weyl modules `W(n)` of `sl2[t]`, realized inside the level-1
//! representations `L(Λ0) ⊕ L(Λ1)` of affine `sl2`.
//!
//! The crate is organized bottom-up:
//!
//! - [`combinatorics`]: partitions, boxed partitions, set partitions and the
//!   index triples `ξ = (n, k, λ)` parametrizing the bases.
//! - [`weights`]: the affine weight space spanned by `Λ0, ω1, δ`.
//! - [`fock`]: the lattice (vertex-operator) model, the ground-truth module.
//! - [`wedge`]: a two-species fermionic model of the same module used to
//!   evaluate long words quickly; results are converted back to [`fock`].
//! - [`straighten`]: the straightening engine producing Heisenberg polynomials.
//! - [`cpl`]: the vectors `w_n`, `B(ξ)`, `CL(ξ)`, `B̄(ξ)`.
//! - [`fkops`]: translation operators and the automorphisms `σ̃`, `φ̃`.
//! - [`limit`]: stability and the direct-limit basis of `L(Λ0)`.
//! - [`checks`]: named verification suites shared by the CLI and tests.

pub mod checks;
pub mod combinatorics;
pub mod cpl;
pub mod fkops;
pub mod fock;
pub mod limit;
pub mod linalg;
pub mod rational;
pub mod straighten;
pub mod wedge;
pub mod weights;

mod error;

pub use error::{Error, Result};
pub use rational::Rational;

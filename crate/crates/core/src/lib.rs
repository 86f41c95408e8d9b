//! One-dimensional Schrodinger bound-state solver and zero-structure
//! verification toolkit.
//!
//! The crate solves -psi'' + V psi = E psi (units hbar^2/2m = 1) on a domain
//! truncated by hard walls at x = +-a, and numerically exercises the
//! Sturm-theory facts about eigenfunction zeros:
//!
//! - state n has exactly n - 1 interior nodes ([`nodes::verify_node_count`]);
//! - between consecutive zeros of a lower state lies a zero of any higher
//!   state ([`nodes::verify_interlacing`]);
//! - zeros of independent same-energy solutions alternate
//!   ([`nodes::verify_separation`]);
//! - the Wronskian derivative and integral identities behind the comparison
//!   theorem hold to discretization accuracy ([`wronskian`]);
//! - node counts are invariant as the walls separate ([`homotopy`]).
//!
//! Two independent solvers are provided: Numerov shooting with node-count
//! bracketing ([`solver`]) and a finite-difference tridiagonal eigensolver
//! ([`tridiag`]). The shooting method brackets by node count and therefore
//! assumes the oscillation property; the matrix solver does not, which makes
//! their agreement a meaningful check rather than a tautology.
//!
//! All numerics are generic over the scalar type via [`scalar::Real`]
//! (`f32` or `f64`); the `*64` aliases at the crate root pin the default
//! `f64` precision.

// Parameter checks use `!(x > 0)` rather than `x <= 0` on purpose: with a
// partial order the negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Stencil loops index several slices at matching offsets; iterator chains
// over zipped windows obscure them.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod grid;
pub mod homotopy;
pub mod nodes;
pub mod potential;
pub mod scalar;
pub mod solver;
pub mod squarewell;
pub mod tridiag;
pub mod wronskian;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default-precision aliases.
pub type PotentialSpec64 = potential::PotentialSpec<f64>;
pub type WalledPotential64 = potential::WalledPotential<f64>;
pub type Grid64 = grid::Grid<f64>;
pub type Eigenpair64 = solver::Eigenpair<f64>;
pub type SolveOptions64 = solver::SolveOptions<f64>;
pub type Branch64 = homotopy::Branch<f64>;
pub type SweepConfig64 = homotopy::SweepConfig<f64>;

//! Exact-rational dense linear algebra.

pub mod matrix;
pub mod rational;
pub mod signature;
pub mod subspace;

pub use matrix::{RationalMatrix, Rref};
pub use rational::{format_rational, parse_rational, Rational};
pub use signature::{symmetric_signature, Inertia};
pub use subspace::{image, kernel_basis, subspace_annihilator, Subspace};

/// Reduced row echelon form, pivot columns and rank.
pub fn row_reduce(m: &RationalMatrix) -> Rref {
    m.row_reduce()
}

/// Solution of `m·x = b`, `Ok(None)` when `b` is not in the column space.
pub fn solve(m: &RationalMatrix, b: &[Rational]) -> crate::error::Result<Option<Vec<Rational>>> {
    m.solve(b)
}

//! Exact rational linear algebra.
//!
//! Everything downstream (category algebras, resolutions, Bredon homology,
//! Mackey algebras) reduces to rank / kernel / solve / cokernel questions
//! over ℚ, so those four operations are the whole public surface here.
//! Arithmetic is exact; no floating point anywhere.

mod matrix;
mod rational;

pub use matrix::{
    cokernel_projection, kernel_basis, pivot_columns, rank, solve, RatMatrix, SparseMat,
};
pub use rational::{rat, rat_from_str, rat_to_string, Rational};

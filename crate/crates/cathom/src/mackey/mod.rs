//! The Mackey category of a finite group on the
//! induction–conjugation–restriction basis, its category algebra μ_ℚ(G),
//! the functor from the orbit category, the explicit projectivity
//! isomorphism, Mackey extensions of orbit-category modules, and the
//! infinite dihedral non-regularity witness.

mod basis;
mod dinfty;
mod extension;
mod orbitmap;

pub use basis::{mackey_algebra, MackeyAlgebra, TwElement};
pub use dinfty::{dinfty_witness, DinftyReport};
pub use extension::{mackey_extension_exists, ExtensionReport};
pub use orbitmap::{functor_i, verify_f_isomorphism, FReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MackeyError {
    #[error(transparent)]
    Orbit(#[from] crate::orbitcat::OrbitError),
    #[error(transparent)]
    Catalg(#[from] crate::catalg::CatalgError),
    #[error("module does not live over the full orbit category of the group")]
    CategoryMismatch,
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

//! Chain complexes of 𝒞-modules and cellular models of diagram
//! CW-complexes: Bredon homology, the homology axioms as checkable
//! structure (suspension, wedge, cone), Künneth dimension identities,
//! derived splitting with obstruction certificates, and Chern character
//! decompositions.

mod complex;
mod free;
mod kunneth;
mod split;

pub use complex::{homology, HomologyData, ModuleComplex};
pub use free::{
    algebraic_cone, bredon_homology, hom_elt_compose, suspension, wedge, Cell, FreeBasedComplex,
    FreeChainMap, GradedDims, HomElt,
};
pub use kunneth::{chern_character, kunneth_check, ChernReport, KunnethMode, KunnethReport};
pub use split::{
    build_nonsplit_complex, ext2_nonzero_cocycle, is_derived_split, lift_through,
    obstruction_class_from_cocycle, two_stage_obstruction, ObstructionClass, SplitCertificate,
    SplitMode, SplitParams, SplitReport,
};

use crate::catalg::CatalgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BredonError {
    #[error("differentials do not square to zero at degree {0}")]
    NotAComplex(i64),
    #[error("complex and coefficients live over different categories")]
    CategoryMismatch,
    #[error("coefficient module has the wrong variance")]
    VarianceMismatch,
    #[error("the given degreewise maps are not a chain map (degree {0})")]
    NotChainMap(i64),
    #[error("homology spread over more than two adjacent degrees: {0:?}")]
    HomologyTooSpread(Vec<i64>),
    #[error("the obstruction class vanishes")]
    ZeroClass,
    #[error("coefficient homology in degree {0} is not flat/projective")]
    CoefficientsNotFlat(i64),
    #[error("splitting mode requires a hereditary algebra")]
    NotHereditary,
    #[error(transparent)]
    Catalg(#[from] CatalgError),
    #[error("invalid complex data: {0}")]
    Invalid(String),
}

//! The category algebra ℚ𝒞 and its module theory: functors to
//! finite-dimensional ℚ-vector spaces, the flattening equivalence Ξ,
//! tensor and Hom over 𝒞, projectivity with splitting witnesses,
//! resolutions, Ext/Tor, the Jacobson radical and the hereditarity
//! decision.

mod homtensor;
mod module;
mod resolve;

pub use homtensor::{
    hom_over_c, tensor_over_c, xi, xi_inverse, FlatModule, HomSpace, TensorSpace,
};
pub use module::{
    free_module, map_from_generators, same_category, CatModule, FreeModule, ModuleMap, Variance,
};
pub use resolve::{
    category_algebra, cover, ext_groups, is_hereditary, is_projective, jacobson_radical,
    projective_resolution, radical_is_noniso_span, radical_left_module, splitting_section,
    tor_groups, CategoryAlgebra, ProjectivityWitness, Resolution, DEFAULT_MAX_RESOLUTION,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalgError {
    #[error("category is not EI")]
    NotEI,
    #[error("modules live over different categories")]
    CategoryMismatch,
    #[error("modules have different variance")]
    VarianceMismatch,
    #[error("flat module is degenerate: {0}")]
    Degenerate(String),
    #[error("projective resolution exceeds maximum length {0}")]
    ResolutionTooLong(usize),
    #[error("invalid module data: {0}")]
    Invalid(String),
}

//! Steiner triple systems: constructions, an exact automorphism and
//! isomorphism engine, Fano subsystem analysis, order arithmetic, and
//! embeddings of partial systems.

pub mod constructions;
pub mod error;
pub mod fano;
pub mod group;
pub mod io;
pub mod params;
pub mod perm;
pub mod pstss;
pub mod search;
pub mod system;

pub use error::{Error, Result};
pub use fano::{classify_fano, enumerate_fano, FanoClassification};
pub use group::PermutationGroup;
pub use perm::Permutation;
pub use search::{
    are_isomorphic, automorphism_group, automorphism_group_with, canonical_form, canonical_labeling, CanonicalForm,
    IsoCertificate, SearchConfig,
};
pub use system::{
    is_automorphism, validate_pstss, validate_sts, PartialTripleSystem, Point, PointSet, Triple, TripleStructure,
    TripleSystem, ValidationReport, Violation,
};

/// Order-arithmetic certificates over arbitrary-precision integers.
pub type ParameterSolution = params::ParameterSolution<num_bigint::BigInt>;
/// The same certificates over `i128`, for orders that fit.
pub type ParameterSolution128 = params::ParameterSolution<i128>;

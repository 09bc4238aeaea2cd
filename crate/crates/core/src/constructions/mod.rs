//! Explicit constructions of Steiner triple systems.

pub mod base;
pub mod embed;
pub mod moore;
pub mod paired;
pub mod predicates;
pub mod products;
pub mod random;

pub use base::{affine_plane, ag23, bose, pg_sts, skolem, standard_sts, BlockDesign};
pub use embed::embed_subsystem;
pub use moore::{
    label_anchored, label_per_p7, lift_automorphism, moore, moore_variant_sigma, CyclicLabeling, MooreInput,
    MooreLayout, MoorePoint,
};
pub use paired::paired_via_design;
pub use predicates::{is_pg2_paired, is_pg2_pointed, is_pg3_2pointed};
pub use products::{direct_product, double, double_star};
pub use random::{random_sts, rigid_sts_search};

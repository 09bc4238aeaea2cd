//! Embedding partial systems so that their automorphisms, and only those,
//! extend.

pub mod boolean;
pub mod enlargements;
pub mod gadgets;
pub mod reconstruct;

pub use boolean::{
    boolean_space, boolean_space_with_cap, replace_triples, BooleanReplacement, BooleanSpace, JoinSystem, DEFAULT_NP_CAP,
};
pub use enlargements::{rigid_enlargement, set_stabilizer_system, RigidPair};
pub use gadgets::{attach_gadgets, attach_gadgets_with, build_q, build_qr, cyclic_pstss, Attachment, CyclicPstss, GadgetQ};
pub use reconstruct::{reconstruct_line, recover_vprime, LineReconstruction};

//! Finite groups as Cayley tables, their automorphisms, and GI-extensions.
//!
//! A GI-extension of `G` is an index-2 overgroup generated by involutions
//! lying outside `G`. These correspond to involutive automorphisms whose
//! inverted set generates `G`, counted up to conjugacy in `Out(G)`.

mod automorphism;
mod cayley;
mod closure;
mod gi;
mod hom;
mod invariants;
mod standard;

pub use automorphism::{
    automorphism_group, automorphism_group_with, automorphisms, automorphisms_with, AutConfig, Automorphism,
    AutomorphismGroup, OutClassPartition, AUT_CAP, AUT_ENUMERATION_CAP,
};
pub use cayley::{CayleyGroup, Elem, CAYLEY_CAP};
pub use closure::{
    group_from_generators, group_from_generators_capped, regular_permutations, Closure, GroupElement, Permutation,
};
pub use gi::{
    build_semidirect_c2, gi_automorphisms, gi_extension_count, gi_extension_count_with, is_generated_by_involutions,
    is_gi_automorphism, is_gi_extension_direct, GIReport,
};
pub use invariants::{
    count_isomorphism_classes, find_isomorphism, is_isomorphic, Fingerprint, IsoCount, FULL_ISOMORPHISM_LIMIT,
};
pub use standard::{standard_group, StandardGroup};

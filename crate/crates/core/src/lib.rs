//! Typed higher-order quantum maps.
//!
//! This crate implements a small formal system for objects at every level of
//! the quantum hierarchy — states, channels, superchannels, and beyond:
//!
//! - a type language of elementary words and arrows, with parsing, canonical
//!   formatting, tree rendering, and the parallel product on types
//!   ([`types`], [`parse`], [`render`]);
//! - dense-matrix representations of every map space under one fixed
//!   coordinate convention ([`linmap`]);
//! - the parallel product on maps, via basis-product isomorphisms
//!   ([`parallel`]);
//! - the positivity cone family generalizing complete positivity, the
//!   Hermitian-preserving family, a recursive Choi linearization, membership
//!   verdicts, and Jordan decompositions ([`mod@choi`], [`cones`]);
//! - a JSON map-file format for interchange ([`fileformat`]).

mod eigen;

pub mod choi;
pub mod cones;
pub mod error;
pub mod fileformat;
pub mod linmap;
pub mod parallel;
pub mod parse;
pub mod registry;
pub mod render;
pub mod types;

pub use choi::{choi, choi_dim, choi_linearization, unchoi, ChoiLinearization};
pub use cones::{
    dual_pair_check, in_h, in_k, in_k_choi, in_k_definitional, jordan_decompose,
    random_cone_element, ConeFamily, ConeVerdict, Decision, MembershipMethod, ProbeWitness,
};
pub use error::{Error, ParseError, Result};
pub use fileformat::{load_map, map_from_json, map_to_json, save_map};
pub use linmap::{
    canonical_basis, hilbert_dim, identity_map, matrix_shape, space_dim, C64, CMatrix, CVector,
    TypedMap, COORDINATE_CONVENTION,
};
pub use parallel::{append_fixed, parallel_iso, parmap, ParallelIso, Side, SPANNING_TOLERANCE};
pub use parse::{parse_type, parse_type_in};
pub use registry::SystemRegistry;
pub use render::render_tree;
pub use types::{Label, ProductCase, ProductStep, Shape, Type};

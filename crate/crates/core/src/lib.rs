//! Congruence rigidity for simply connected absolutely almost simple groups
//! over number fields.
//!
//! The pipeline: a [`descriptor::GroupDescriptor`] bundles the group type, the
//! ground field with its places, the automorphisms fixing the splitting class,
//! the local invariants and the real forms. [`classifier::classify`] decides
//! whether every group locally isomorphic at all finite places is globally
//! isomorphic, and produces a witness twin when it is not.

pub mod arith_equiv;
pub mod brauer_witt;
pub mod classifier;
pub mod cli;
pub mod descriptor;
pub mod error;
pub mod field_model;
pub mod invariant_algebra;
pub mod perm;
pub mod real_forms;

pub use error::{Error, Result};

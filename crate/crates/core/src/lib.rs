//! Finite model theory of module categories over finite rings.
//!
//! The crate is organised bottom-up: [`logic`] holds many-sorted first-order
//! syntax and a finite-model evaluator, [`algebra`] finite rings, [`module`]
//! finite right modules and skeletons of `mod-R`, [`category`] the two-sorted
//! encoding of a skeleton together with the categorical formulas, and the
//! remaining modules build on those.

pub mod algebra;
pub mod caps;
pub mod catalog;
pub mod category;
pub mod error;
pub mod groups;
pub mod lattice;
pub mod logic;
pub mod module;
pub mod par;
pub mod sample;
pub mod suite;
pub mod ultra;

pub use caps::Caps;
pub use error::{Error, Result};

#![no_std]

//! Exact algebra for equivariant linking of periodic links with lattice spines.
//!
//! The crate works in the group ring `Z[Z^d]` (`d = 2` for the relative
//! model `T^2 x I`, `d = 3` for `T^3`) and its augmentation-ideal filtration
//! quotients `I^k / I^{k+1}`. On top of that it provides
//!
//! - cubical lattice chains, fillings and the geometric equivariant linking
//!   pairing with a periodic line arrangement ([`lattice`]),
//! - the plaquette, meridian and edge modules with their filtration bases
//!   ([`modules`]),
//! - linking matrices, injectivity tests and filling certificates
//!   ([`certify`]),
//! - finger-move perturbations of the linking map ([`finger`]),
//! - free-group words, Magnus expansion and the maps `phi_k` ([`nilpotent`]).
//!
//! Everything is a pure function of immutable values and needs only `alloc`.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod certify;
pub mod error;
pub mod finger;
pub mod lattice;
pub mod linalg;
pub mod link;
pub mod modules;
pub mod nilpotent;
pub mod ring;

pub use crate::error::{Error, Result};
pub use crate::lattice::Ambient;
pub use crate::link::{Component, LinkSpec};
pub use crate::ring::{AugClass, Filtration, LaurentPoly, Monomial, MultiIndex};

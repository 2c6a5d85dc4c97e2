//! Exact computational workbench for operads and their algebras.
//!
//! Everything here is computed over one of two concrete symmetric monoidal
//! categories: finite-dimensional rational vector spaces with chosen bases
//! (`VectQ`, exact `BigRational` arithmetic throughout) and finite sets
//! (`FinSet`). On top of the base categories the crate builds truncated
//! symmetric operads, their algebras and modules, enveloping operads and
//! enveloping algebras, Hopf structure, base change for monoid modules, and
//! the coloured-tree combinatorics used for operadic cell attachments.
//!
//! The crate is `no_std` (with `alloc`); IO, JSON and the command line live
//! in the companion `operadix` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod base_change;
pub mod cat;
pub mod envelope;
pub mod error;
pub mod hopf;
pub mod linalg;
pub mod module;
pub mod monoid;
pub mod operad;
pub mod perm;
pub mod rational;
pub mod trees;

pub use cat::{Cat, Elem, Morphism, Obj, SymObj};
pub use error::Error;
pub use rational::Q;

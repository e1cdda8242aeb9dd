//! Unitary representations of crystallographic-type groups `A ⋊_c Q`
//! (a lattice extended by a finite point group), and topology of their
//! moduli spaces.

pub mod acceptance;
pub mod classify;
pub mod error;
pub mod group;
pub mod linalg;
pub mod numeric;
pub mod paths;
pub mod probe;
pub mod projective;
pub mod rep;
pub mod topology;
pub mod torus;

pub use error::{Error, Result};

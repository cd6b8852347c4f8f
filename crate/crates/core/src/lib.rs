//! Output distributions of shallow Clifford and Clifford+T circuits, the
//! sample and statistical-query oracles over them, and learners for them.
//!
//! Bit `i` of every [`f2linalg::BitVec`] is qubit `i`, and bit `i` of a basis
//! state index.

pub mod affine;
pub mod circuit;
pub mod dist;
pub mod error;
pub mod f2linalg;
pub mod harness;
pub mod learn;
pub mod stab;
pub mod statevector;

pub use error::{Error, Result};

//! Exact computations around classifying spaces of Kac-Moody groups:
//! spherical posets, Weyl group combinatorics, invariant lattices, higher
//! derived limits over finite posets and the resulting spectral sequence
//! pages.

pub mod arith;
pub mod error;
pub mod gcm;
pub mod holim;
pub mod invariants;
pub mod linalg;
pub mod poset;
pub mod sseq;
pub mod tits;
pub mod weyl;

pub use error::{Error, Result};

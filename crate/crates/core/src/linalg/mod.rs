//! Exact integer linear algebra: dense and sparse matrices, Smith normal form
//! invariant factors, and sublattices with canonical Hermite bases.

mod lattice;
mod matrix;
pub mod scalar;
mod snf;

pub use lattice::{determinant, hermite_rows, kernel_vectors, rank, rank_bareiss, rank_mod_p, small, Lattice};
pub use matrix::{IntMatrix, SparseMatrix};
pub use scalar::Overflow;
pub use snf::{invariant_factors, valuation};

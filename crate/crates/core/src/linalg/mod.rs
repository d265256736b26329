//! Exact linear algebra over a [`crate::Scalar`]: matrices, canonical subspaces and
//! σ-semilinear maps.

mod matrix;
mod sigma;
mod subspace;

pub use matrix::Matrix;
pub use sigma::SigmaLinearMap;
pub use subspace::{reduced_echelon, unit_vector, Subspace};

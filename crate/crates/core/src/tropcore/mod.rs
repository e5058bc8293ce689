//! Exact min-plus scalar and matrix arithmetic.

mod matrix;
mod scalar;
pub mod text;

pub use matrix::{hadamard_min, mat_mul, mat_pow, similarity, Potentials, TropMatrix};
pub use scalar::TropScalar;
pub use text::{format_matrix, parse_matrices, parse_matrix};

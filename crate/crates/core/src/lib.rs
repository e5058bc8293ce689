//! Exact min-plus matrix algebra, and a checker for a two-letter word
//! identity that holds for every pair of tropical 3x3 matrices.
//!
//! Modules, bottom-up:
//!
//! - [`tropcore`]: exact rational scalars, matrices, products, powers, similarity.
//! - [`permanent`]: tropical permanent, its full witness set, parity, sign-singularity.
//! - [`dominance`]: diagonal H-dominance, the cycle criterion, shortest-path potentials.
//! - [`words`]: word expressions over `{x, y}` with DAG evaluation and streaming expansion.
//! - [`factor3`]: rank-2 factorization of sign-singular 3x3 matrices.
//! - [`harness`]: seeded generators and the property suites behind `tropid verify`.

pub mod dominance;
pub mod error;
pub mod factor3;
pub mod harness;
pub mod permanent;
pub mod tropcore;
pub mod words;

pub use error::{Result, TropError};
pub use tropcore::{Potentials, TropMatrix, TropScalar};

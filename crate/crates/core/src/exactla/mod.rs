//! Exact linear algebra over ℚ or a prime field.
//!
//! Every rank, kernel, solve and intersection computation in the crate goes
//! through this module. Dense [`Matrix`]/[`Subspace`] cover the small systems;
//! [`SparseVec`]/[`Echelon`] cover the bar-complex systems, whose matrices are
//! large but very sparse.

mod matrix;
mod scalar;
mod sparse;
mod subspace;

pub use matrix::{Matrix, Rref};
pub use scalar::{Field, ModP, Rational, Scalar};
pub use sparse::{Echelon, SparseVec};
pub use subspace::Subspace;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("unrecognised field `{0}` (expected Q or F<p>)")]
    BadField(String),
    #[error("malformed scalar `{0}`")]
    BadScalar(String),
    #[error("denominator of {0} vanishes modulo {1}")]
    DenominatorVanishes(String, u64),
}

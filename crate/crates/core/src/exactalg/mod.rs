//! Exact linear algebra over Q and GF(p): scalars, dense matrices, canonical
//! subspaces, polynomials and eigen-decompositions of split diagonalizable
//! operators.

mod echelon;
mod eigen;
mod field;
mod matrix;
mod poly;
mod subspace;

pub use echelon::{Insertion, SpanReducer};
pub use eigen::{min_poly, EigenDecomposition};
pub use field::{Field, Scalar, MAX_PRIME};
pub use matrix::{Matrix, Rref, Vector};
pub use poly::Polynomial;
pub use subspace::Subspace;

pub(crate) use matrix::is_zero_vector;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a supported prime modulus (need a prime p <= 65536)")]
    InvalidModulus(u32),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operator is not diagonalizable over {field}: {reason}")]
    NotDiagonalizableOverField { field: Field, reason: String },
}

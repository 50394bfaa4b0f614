//! Exact certification of tridiagonal pairs over Q and GF(p).
//!
//! A tridiagonal pair is a pair of diagonalizable operators `A, A*` on a
//! finite-dimensional space, each acting block-tridiagonally on the other's
//! eigenspaces, with no common invariant subspace other than `0` and `V`.
//! This crate validates candidate pairs, computes the split decomposition and
//! the shape, decides whether a pair is Leonard (shape `(1, …, 1)`), and
//! searches small prime fields for pairs of a prescribed shape.

pub mod exactalg;
pub mod leonard;
pub mod search;
pub mod splitdecomp;
pub mod tdpair;

pub use exactalg::{AlgebraError, EigenDecomposition, Field, Matrix, Polynomial, Scalar, Subspace, Vector};

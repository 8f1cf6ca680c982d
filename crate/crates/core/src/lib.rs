//! Non-backtracking walks on finite graphs and integer lattices.
//!
//! A walk `v_0, v_1, ..., v_k` is non-backtracking when `v_{i+1} != v_{i-1}`
//! for every interior step; the first step is unrestricted. This crate
//! computes, exactly where possible:
//!
//! * walk-count matrices on arbitrary finite graphs ([`nb_matrix`]),
//! * the polynomial family that expresses non-backtracking transition
//!   matrices of regular graphs in terms of the simple-walk transition
//!   matrix ([`chebyshev`], [`spectrum`]),
//! * closed-walk counts and return-probability series on `Z^d`
//!   ([`lattice`], [`combinatorics`]),
//! * seeded Monte Carlo estimates of the same quantities ([`sim`]).
//!
//! Counts are arbitrary-precision integers and probabilities are exact
//! rationals; floating point appears only in spectral sums, asymptotic
//! diagnostics, and output formatting.

pub mod budget;
pub mod chebyshev;
pub mod combinatorics;
pub mod error;
pub mod export;
pub mod graph;
pub mod lattice;
pub mod matrix;
pub mod nb_matrix;
pub mod sim;
pub mod spectrum;
pub mod verify;

pub use budget::Budgets;
pub use error::{Error, Result};
pub use graph::{FiniteGraph, TorusSpec};
pub use matrix::{IntMatrix, RatMatrix};
pub use nb_matrix::{TransitionMatrix, WalkCountMatrix};

/// Arbitrary-precision nonnegative walk count.
pub type BigCount = num_bigint::BigUint;

/// Exact probability (or signed exact scalar).
pub type BigRatio = num_rational::BigRational;

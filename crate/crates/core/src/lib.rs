//! Complex Hadamard matrices and their defect.
//!
//! The undephased defect `d(H)` of an `N x N` complex Hadamard matrix is the
//! dimension of the real solution space of
//!
//! ```text
//! sum_k H_ik conj(H_jk) (A_ik - A_jk) = 0   for all i != j,   A real N x N
//! ```
//!
//! This crate builds the standard families (Fourier matrices of finite
//! abelian groups, deformed tensor products, Haagerup and Tao matrices,
//! circulants), computes `d(H)` as a certified numerical corank, and checks
//! it against exact closed forms for Fourier matrices, an exact rational
//! nullity over cyclotomic fields, and fixed-point statistics of the regular
//! representation.

pub mod cli;
pub mod cyclotomic;
pub mod defect;
pub mod error;
pub mod exact;
pub mod group;
pub mod hadamard;
pub mod stats;

pub use error::{Error, Result};

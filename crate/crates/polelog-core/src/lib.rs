//! Exact-arithmetic engine for graded invariants of logarithmic de Rham
//! complexes of (weighted) homogeneous divisors and central hyperplane
//! arrangements: pole order spectral sequence pages, Brieskorn-module torsion
//! indicators, integral Bernstein–Sato root indicators, regularity / tameness
//! / freeness of logarithmic modules, and residue-based arrangement
//! certificates.
//!
//! All arithmetic is exact: arbitrary-precision rationals by default, with an
//! optional multi-prime modular mode (consensus over several word-size
//! primes) for the larger spectral tables.

pub mod arrangement;
pub mod derham;
pub mod error;
pub mod localcoh;
pub mod poly;
pub mod resolution;
pub mod scalar;
pub mod sketch;
pub mod sparse;
pub mod spectral;
pub mod whlct;

pub use error::{Error, Result};
pub use poly::{Poly, WeightVector};
pub use scalar::{ExactScalar, Scalar};
pub use sparse::{kernel_basis, rank, solve, SparseMatrix, SparseVec};

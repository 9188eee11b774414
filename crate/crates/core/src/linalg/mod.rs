//! Exact integer and rational dense linear algebra: Hermite normal form,
//! determinants, dual bases, lattice intersection, LLL reduction and
//! short-vector enumeration.

mod enumerate;
mod hnf;
mod lll;
mod matrix;

pub use enumerate::{combine, enumerate_short_vectors, norm_sq};
pub use hnf::{canonical_basis, det, det_int, dual_basis, hnf, hnf_contains, hnf_mod, lattice_intersect};
pub use lll::{default_delta, gram_schmidt, is_lll_reduced, lll_reduce, lll_reduce_int};
pub use matrix::{IntMatrix, MatrixJson, RatMatrix};


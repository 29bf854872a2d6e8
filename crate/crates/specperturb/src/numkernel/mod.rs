//! Deterministic dense linear algebra and seeded random generation.
//!
//! Everything here is a pure function of its inputs: two calls on the same
//! data produce bit-identical results, including under the internal rayon
//! parallelism (each output element is written by exactly one task).

mod eig;
mod matrix;
mod qr;
mod rng;
mod svd;

pub use eig::{sym_eig, SymEigResult};
pub use matrix::{dist_sq, dot, norm2, Matrix};
pub use qr::{householder_qr, random_orthogonal};
pub use rng::{gaussian_matrix, SeededRng};
pub use svd::{svd, SvdResult};

//! Multi-class spectral clustering on data perturbed by compressed-sensing
//! measurements, missing entries recovered by matrix completion, or direct
//! affinity noise, together with machinery that turns the relevant
//! eigenvector perturbation bounds into checkable inequalities on concrete
//! instances.
//!
//! Module map:
//! - [`numkernel`]: dense symmetric eigensolver (cyclic Jacobi), one-sided
//!   Jacobi SVD, Householder QR, seeded RNG.
//! - [`affinity`]: Gaussian-kernel graph, degree/symmetric/random-walk
//!   normalizations.
//! - [`embedding`]: spectral coordinates, k-means, misclassification rate.
//! - [`subspace`]: canonical angles, Procrustes alignment, projection
//!   distances between eigenvector subspaces.
//! - [`sensing`]: Gaussian measurement operators and empirical restricted
//!   isometry constants.
//! - [`completion`]: soft-impute nuclear-norm matrix completion.
//! - [`bounds`]: the perturbation inequalities as pass/fail reports.
//! - [`synthgen`]: deterministic generators for the synthetic instance
//!   families used throughout.

pub mod affinity;
pub mod bounds;
pub mod completion;
pub mod embedding;
mod error;
pub mod numkernel;
pub mod sensing;
pub mod subspace;
pub mod synthgen;

pub use error::{Error, Result};

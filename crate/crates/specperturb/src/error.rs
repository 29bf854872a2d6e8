use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {0} x {1}")]
    NotSquare(usize, usize),

    #[error("matrix is not symmetric: |a[{i},{j}] - a[{j},{i}]| = {diff:e} exceeds tolerance")]
    NotSymmetric { i: usize, j: usize, diff: f64 },

    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty matrix: dimensions must be at least 1 x 1")]
    EmptyMatrix,

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("row {0} has zero weight sum (isolated vertex)")]
    ZeroDegreeRow(usize),

    #[error("negative entry at ({0}, {1}): weights must be non-negative")]
    NegativeWeight(usize, usize),

    #[error("columns are not orthonormal: deviation {0:e} exceeds tolerance")]
    NotOrthonormal(f64),

    #[error("observation mask is empty")]
    EmptyMask,

    #[error("mask index ({0}, {1}) out of range for {2} x {3}")]
    MaskOutOfRange(usize, usize, usize, usize),

    #[error("duplicate mask entry at ({0}, {1})")]
    DuplicateMaskEntry(usize, usize),

    #[error("too many distinct labels for exhaustive matching: {0} > {1}")]
    TooManyClasses(usize, usize),

    #[error("no valid point pairs: all rows are identical")]
    NoValidPairs,

    #[error("{algorithm} did not converge within {limit} sweeps")]
    ConvergenceFailed { algorithm: &'static str, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

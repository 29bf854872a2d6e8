//! Canonical angles, Procrustes alignment and projection distances
//! between two k-dimensional subspaces given by orthonormal bases.

use crate::error::{Error, Result};
use crate::numkernel::{norm2, svd, Matrix};
use serde::Serialize;

const ORTHO_TOL: f64 = 1e-8;

/// Everything one wants to know about how two eigenvector subspaces sit
/// relative to each other.
///
/// `cos_gammas` are the singular values of V^T W (descending, in [0,1]),
/// `angles` the corresponding canonical angles (ascending). `q` is the
/// orthogonal matrix minimizing ||W - V Q||_F.
#[derive(Debug, Clone, Serialize)]
pub struct SubspaceComparison {
    pub k: usize,
    pub cos_gammas: Vec<f64>,
    pub angles: Vec<f64>,
    pub q: Vec<Vec<f64>>,
    pub sin_theta_fro: f64,
    pub proj_dist_fro: f64,
    pub embed_dist_2: f64,
    pub max_row_dist: f64,
}

impl SubspaceComparison {
    pub fn max_angle(&self) -> f64 {
        self.angles.last().copied().unwrap_or(0.0)
    }
}

fn check_orthonormal(v: &Matrix) -> Result<()> {
    let vtv = v.transpose().matmul(v)?;
    let dev = vtv.sub(&Matrix::identity(v.cols()))?.frobenius_norm();
    if dev > ORTHO_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    Ok(())
}

fn check_pair(v: &Matrix, w: &Matrix) -> Result<()> {
    if v.dims() != w.dims() {
        return Err(Error::DimensionMismatch(format!(
            "subspace bases of shapes {:?} and {:?}",
            v.dims(),
            w.dims()
        )));
    }
    check_orthonormal(v)?;
    check_orthonormal(w)
}

/// Canonical angles theta_i = arccos(gamma_i), ascending, where gamma_i
/// are the singular values of V^T W clamped into [0, 1].
pub fn canonical_angles(v: &Matrix, w: &Matrix) -> Result<Vec<f64>> {
    check_pair(v, w)?;
    let gammas = cos_gammas(v, w)?;
    Ok(gammas.iter().map(|&g| g.acos()).collect())
}

fn cos_gammas(v: &Matrix, w: &Matrix) -> Result<Vec<f64>> {
    let cross = v.transpose().matmul(w)?;
    let dec = svd(&cross)?;
    Ok(dec
        .singular_values
        .iter()
        .map(|&s| s.clamp(0.0, 1.0))
        .collect())
}

/// Orthogonal Q = Y Z^T from the SVD Y diag(cos theta) Z^T of V^T W, the
/// minimizer of ||W - V Q||_F, together with the spectral-norm residual
/// ||W - V Q||_2 and the per-row distances ||w(i) - v(i) Q||_2.
pub fn procrustes_align(v: &Matrix, w: &Matrix) -> Result<(Matrix, f64, Vec<f64>)> {
    check_pair(v, w)?;
    let cross = v.transpose().matmul(w)?;
    let dec = svd(&cross)?;
    let q = dec.u.matmul(&dec.v.transpose())?;
    let diff = w.sub(&v.matmul(&q)?)?;
    let embed_dist_2 = spectral_norm(&diff)?;
    let row_dists: Vec<f64> = (0..diff.rows()).map(|i| norm2(diff.row(i))).collect();
    Ok((q, embed_dist_2, row_dists))
}

/// ||P_V - P_W||_F computed without materializing the N x N projectors,
/// via ||P_V - P_W||_F^2 = 2k - 2 ||V^T W||_F^2.
pub fn projection_distance(v: &Matrix, w: &Matrix) -> Result<f64> {
    check_pair(v, w)?;
    let cross = v.transpose().matmul(w)?;
    let k = v.cols() as f64;
    let cross_sq = cross.frobenius_norm().powi(2);
    Ok((2.0 * k - 2.0 * cross_sq).max(0.0).sqrt())
}

/// Largest singular value.
pub fn spectral_norm(m: &Matrix) -> Result<f64> {
    Ok(svd(m)?.singular_values.first().copied().unwrap_or(0.0))
}

/// Full comparison of two orthonormal bases.
pub fn compare(v: &Matrix, w: &Matrix) -> Result<SubspaceComparison> {
    check_pair(v, w)?;
    let gammas = cos_gammas(v, w)?;
    let angles: Vec<f64> = gammas.iter().map(|&g| g.acos()).collect();
    let sin_theta_fro = angles.iter().map(|&t| t.sin().powi(2)).sum::<f64>().sqrt();
    let proj_dist_fro = projection_distance(v, w)?;
    let (q, embed_dist_2, row_dists) = procrustes_align(v, w)?;
    let max_row_dist = row_dists.iter().fold(0.0f64, |m, &d| m.max(d));
    let q_rows: Vec<Vec<f64>> = (0..q.rows()).map(|i| q.row(i).to_vec()).collect();
    Ok(SubspaceComparison {
        k: v.cols(),
        cos_gammas: gammas,
        angles,
        q: q_rows,
        sin_theta_fro,
        proj_dist_fro,
        embed_dist_2,
        max_row_dist,
    })
}

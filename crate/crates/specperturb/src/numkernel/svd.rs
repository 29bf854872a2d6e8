use crate::error::{Error, Result};
use crate::numkernel::matrix::{dot, norm2};
use crate::numkernel::Matrix;

const MAX_SWEEPS: usize = 60;
const ORTHO_REL_TOL: f64 = 1e-14;

/// Thin singular value decomposition M = U diag(sigma) V^T.
///
/// With (m, n) = dims and k = min(m, n): U is m x k, V is n x k, both with
/// orthonormal columns; singular values are non-negative and descending.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

impl SvdResult {
    /// Number of singular values above `tol`; `None` uses 1e-10 * sigma_1.
    pub fn rank(&self, tol: Option<f64>) -> usize {
        let sigma1 = self.singular_values.first().copied().unwrap_or(0.0);
        let tol = tol.unwrap_or(1e-10 * sigma1);
        self.singular_values.iter().filter(|&&s| s > tol).count()
    }

    pub fn reconstruct(&self) -> Matrix {
        let k = self.singular_values.len();
        let mut scaled = self.u.clone();
        for i in 0..scaled.rows() {
            let row = scaled.row_mut(i);
            for j in 0..k {
                row[j] *= self.singular_values[j];
            }
        }
        scaled.matmul(&self.v.transpose()).expect("shape checked")
    }
}

/// One-sided Jacobi SVD (Hestenes). Column pairs of the working matrix are
/// rotated until mutually orthogonal; column norms become the singular
/// values. Operates on the transposed copy so each "column" is contiguous.
pub fn svd(m: &Matrix) -> Result<SvdResult> {
    if m.rows() < m.cols() {
        let r = svd(&m.transpose())?;
        return Ok(SvdResult { u: r.v, singular_values: r.singular_values, v: r.u });
    }
    let rows = m.rows();
    let cols = m.cols();
    // bt rows are the columns of M; vt rows accumulate V^T.
    let mut bt = m.transpose();
    let mut vt = Matrix::identity(cols);
    // Columns whose norm is negligible against the whole matrix carry
    // singular values that are numerically zero; rotating them against
    // each other only churns rounding noise and can cycle forever.
    let total_sq: f64 = bt.data().iter().map(|&v| v * v).sum();
    let col_cutoff_sq = total_sq * 1e-30;

    let mut converged = cols < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (head, tail) = bt.data_mut().split_at_mut(q * rows);
                let bp = &mut head[p * rows..p * rows + rows];
                let bq = &mut tail[..rows];
                let app = dot(bp, bp);
                let aqq = dot(bq, bq);
                if app <= col_cutoff_sq || aqq <= col_cutoff_sq {
                    continue;
                }
                let apq = dot(bp, bq);
                if apq.abs() <= ORTHO_REL_TOL * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for (x, y) in bp.iter_mut().zip(bq.iter_mut()) {
                    let xp = *x;
                    let xq = *y;
                    *x = c * xp - s * xq;
                    *y = s * xp + c * xq;
                }
                let (vh, vt_tail) = vt.data_mut().split_at_mut(q * cols);
                let vp = &mut vh[p * cols..p * cols + cols];
                let vq = &mut vt_tail[..cols];
                for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                    let xp = *x;
                    let xq = *y;
                    *x = c * xp - s * xq;
                    *y = s * xp + c * xq;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::ConvergenceFailed { algorithm: "one-sided jacobi svd", limit: MAX_SWEEPS });
    }

    // Column norms are the singular values; order descending, stable.
    let norms: Vec<f64> = (0..cols).map(|j| norm2(&bt.data()[j * rows..(j + 1) * rows])).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite").then(i.cmp(&j)));

    let sigma1 = order.first().map(|&i| norms[i]).unwrap_or(0.0);
    let zero_cut = sigma1 * 1e-15;
    let mut u = Matrix::zeros(rows, cols);
    let mut v = Matrix::zeros(cols, cols);
    let mut singular_values = Vec::with_capacity(cols);
    let mut zero_cols = Vec::new();
    for (out_j, &src) in order.iter().enumerate() {
        let sn = norms[src];
        singular_values.push(sn);
        if sn > zero_cut && sn > 0.0 {
            let col = &bt.data()[src * rows..(src + 1) * rows];
            for i in 0..rows {
                u.set(i, out_j, col[i] / sn);
            }
        } else {
            zero_cols.push(out_j);
        }
        for i in 0..cols {
            v.set(i, out_j, vt.get(src, i));
        }
    }
    if !zero_cols.is_empty() {
        complete_orthonormal(&mut u, &zero_cols);
    }

    // Sign convention on U columns, compensated in V.
    for j in 0..cols {
        let mut best = 0.0f64;
        let mut sign = 1.0f64;
        for i in 0..rows {
            let x = u.get(i, j);
            if x.abs() > best {
                best = x.abs();
                sign = if x < 0.0 { -1.0 } else { 1.0 };
            }
        }
        if sign < 0.0 {
            for i in 0..rows {
                let x = u.get(i, j);
                u.set(i, j, -x);
            }
            for i in 0..cols {
                let x = v.get(i, j);
                v.set(i, j, -x);
            }
        }
    }
    Ok(SvdResult { u, singular_values, v })
}

/// Fills the listed columns with unit vectors orthogonal to every other
/// column, chosen deterministically from the standard basis.
fn complete_orthonormal(u: &mut Matrix, fill: &[usize]) {
    let (rows, cols) = u.dims();
    let filled: Vec<usize> = (0..cols).filter(|j| !fill.contains(j)).collect();
    let mut done: Vec<usize> = filled;
    for &target in fill {
        let mut chosen = None;
        for e in 0..rows {
            let mut cand = vec![0.0; rows];
            cand[e] = 1.0;
            for &j in &done {
                let proj: f64 = (0..rows).map(|i| cand[i] * u.get(i, j)).sum();
                for i in 0..rows {
                    cand[i] -= proj * u.get(i, j);
                }
            }
            let nrm = norm2(&cand);
            if nrm > 0.5 {
                for x in cand.iter_mut() {
                    *x /= nrm;
                }
                chosen = Some(cand);
                break;
            }
        }
        let col = chosen.expect("orthonormal completion always exists for rows >= cols");
        for i in 0..rows {
            u.set(i, target, col[i]);
        }
        done.push(target);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{gaussian_matrix, SeededRng};

    fn ortho_error(v: &Matrix) -> f64 {
        let vtv = v.transpose().matmul(v).unwrap();
        vtv.sub(&Matrix::identity(v.cols())).unwrap().frobenius_norm()
    }

    #[test]
    fn diagonal_matrix() {
        let m = Matrix::from_rows(vec![vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = svd(&m).unwrap();
        assert_eq!(r.singular_values, vec![3.0, 1.0]);
        assert_eq!(r.u.data(), Matrix::identity(2).data());
        assert_eq!(r.v.data(), Matrix::identity(2).data());
    }

    #[test]
    fn zero_matrix() {
        let r = svd(&Matrix::zeros(3, 2)).unwrap();
        assert_eq!(r.singular_values, vec![0.0, 0.0]);
        assert!(ortho_error(&r.u) < 1e-15);
        assert!(ortho_error(&r.v) < 1e-15);
    }

    #[test]
    fn rank_one_gram() {
        // [[1,2],[2,4]] = (1,2)^T (1,2): sigma = [5, 0].
        // Oracle: Gram trace 1+4+4+16 = 25 = sigma_1^2, det = 0.
        let m = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let r = svd(&m).unwrap();
        assert!((r.singular_values[0] - 5.0).abs() < 1e-12);
        assert!(r.singular_values[1].abs() < 1e-12);
        assert_eq!(r.rank(None), 1);
        let err = r.reconstruct().sub(&m).unwrap().frobenius_norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn random_reconstruction_invariant() {
        let mut rng = SeededRng::new(99);
        for trial in 0..40 {
            let rows = 2 + (trial * 7) % 99;
            let cols = 2 + (trial * 13) % 99;
            let m = gaussian_matrix(rows, cols, &mut rng).unwrap();
            let r = svd(&m).unwrap();
            let err = r.reconstruct().sub(&m).unwrap().frobenius_norm();
            assert!(
                err <= 1e-8 * m.frobenius_norm(),
                "reconstruction error {err} on {rows}x{cols}"
            );
            assert!(ortho_error(&r.u) <= 1e-10);
            assert!(ortho_error(&r.v) <= 1e-10);
            for w in r.singular_values.windows(2) {
                assert!(w[0] >= w[1] && w[1] >= 0.0);
            }
        }
    }

    #[test]
    fn wide_matrix_transposes() {
        let mut rng = SeededRng::new(17);
        let m = gaussian_matrix(3, 8, &mut rng).unwrap();
        let r = svd(&m).unwrap();
        assert_eq!(r.u.dims(), (3, 3));
        assert_eq!(r.v.dims(), (8, 3));
        let err = r.reconstruct().sub(&m).unwrap().frobenius_norm();
        assert!(err <= 1e-10 * m.frobenius_norm());
    }
}

use crate::error::{Error, Result};
use crate::numkernel::Matrix;
use rayon::prelude::*;

const MAX_SWEEPS: usize = 100;
const SYMMETRY_REL_TOL: f64 = 1e-12;
const OFF_DIAG_REL_TOL: f64 = 1e-12;

/// Eigendecomposition of a symmetric matrix.
///
/// `eigenvalues` are sorted in descending order and `eigenvectors` holds
/// the matching orthonormal eigenvectors as columns. Each eigenvector is
/// sign-fixed so that its entry of largest absolute value is positive
/// (ties broken by lowest index), making the output fully deterministic.
#[derive(Debug, Clone)]
pub struct SymEigResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SymEigResult {
    /// Residual ||S V - V diag(lambda)||_F, for invariant checks.
    pub fn residual(&self, s: &Matrix) -> f64 {
        let sv = s.matmul(&self.eigenvectors).expect("shape checked");
        let n = s.rows();
        let k = self.eigenvalues.len();
        let mut acc = 0.0;
        for i in 0..n {
            let v_row = self.eigenvectors.row(i);
            let sv_row = sv.row(i);
            for j in 0..k {
                let d = sv_row[j] - v_row[j] * self.eigenvalues[j];
                acc += d * d;
            }
        }
        acc.sqrt()
    }
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Rotation pairs are scheduled with a round-robin tournament; one sweep
/// visits every pair exactly once. Within a round the pairs are disjoint,
/// so the rotations commute and the row/column updates can be split into
/// two phases. Sweeps run until the off-diagonal Frobenius norm drops
/// below 1e-12 * ||S||_F, up to 100 sweeps.
pub fn sym_eig(s: &Matrix) -> Result<SymEigResult> {
    s.check_symmetric(SYMMETRY_REL_TOL)?;
    let n = s.rows();
    let mut a = s.data().to_vec();
    let mut v = Matrix::identity(n);

    if n > 1 {
        let norm = s.frobenius_norm();
        let tol_off = OFF_DIAG_REL_TOL * norm;
        // Entrywise skip threshold: if every off-diagonal is below this,
        // the off-diagonal norm is already below tol_off.
        let skip_thr = if n > 1 { tol_off / n as f64 } else { tol_off };
        if norm > 0.0 && off_diag_norm(&a, n) > tol_off {
            let mut converged = false;
            for _ in 0..MAX_SWEEPS {
                let rotated = jacobi_sweep(&mut a, &mut v, n, skip_thr);
                if !rotated || off_diag_norm(&a, n) <= tol_off {
                    converged = true;
                    break;
                }
            }
            if !converged && off_diag_norm(&a, n) > tol_off {
                return Err(Error::ConvergenceFailed {
                    algorithm: "jacobi eigensolver",
                    limit: MAX_SWEEPS,
                });
            }
        }
    }

    // Extract the diagonal, order descending (stable on ties), fix signs.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[j * n + j]
            .partial_cmp(&a[i * n + i])
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = v.select_columns(&order);
    fix_column_signs(&mut vectors);
    Ok(SymEigResult { eigenvalues, eigenvectors: vectors })
}

/// Flip each column so its largest-magnitude entry is positive.
pub(crate) fn fix_column_signs(m: &mut Matrix) {
    let (rows, cols) = m.dims();
    for j in 0..cols {
        let mut best = 0.0f64;
        let mut sign = 1.0f64;
        for i in 0..rows {
            let x = m.get(i, j);
            if x.abs() > best {
                best = x.abs();
                sign = if x < 0.0 { -1.0 } else { 1.0 };
            }
        }
        if sign < 0.0 {
            for i in 0..rows {
                let x = m.get(i, j);
                m.set(i, j, -x);
            }
        }
    }
}

fn off_diag_norm(a: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let x = a[i * n + j];
                acc += x * x;
            }
        }
    }
    acc.sqrt()
}

/// One sweep = n-1 tournament rounds covering all index pairs once.
/// Returns whether any rotation was applied.
fn jacobi_sweep(a: &mut [f64], v: &mut Matrix, n: usize, skip_thr: f64) -> bool {
    let m = if n % 2 == 0 { n } else { n + 1 }; // pad with a bye for odd n
    let mut pos: Vec<usize> = (0..m).collect();
    let mut any = false;
    for _ in 0..m - 1 {
        let mut rotations: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(m / 2);
        for i in 0..m / 2 {
            let (x, y) = (pos[i], pos[m - 1 - i]);
            if x >= n || y >= n {
                continue; // bye
            }
            let (p, q) = if x < y { (x, y) } else { (y, x) };
            let apq = a[p * n + q];
            if apq.abs() <= skip_thr {
                continue;
            }
            let app = a[p * n + p];
            let aqq = a[q * n + q];
            // Stable symmetric Schur rotation.
            let tau = (aqq - app) / (2.0 * apq);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            rotations.push((p, q, c, s));
        }
        if !rotations.is_empty() {
            any = true;
            apply_round(a, v, n, &rotations);
        }
        // Rotate the schedule: position 0 fixed, the rest cycle.
        let last = pos[m - 1];
        for i in (2..m).rev() {
            pos[i] = pos[i - 1];
        }
        pos[1] = last;
    }
    any
}

/// Applies a set of disjoint rotations: A <- J^T A J, V <- V J.
/// The rotation parameters were computed from the pre-round matrix; since
/// the pairs are disjoint, entries (p,p), (q,q), (p,q) are untouched by the
/// other rotations of the round, so this matches sequential application.
fn apply_round(a: &mut [f64], v: &mut Matrix, n: usize, rotations: &[(usize, usize, f64, f64)]) {
    // Row phase: A <- J^T A. Rows p and q are disjoint across rotations.
    for &(p, q, c, s) in rotations {
        let (head, tail) = a.split_at_mut(q * n);
        let row_p = &mut head[p * n..p * n + n];
        let row_q = &mut tail[..n];
        for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
            let xp = *x;
            let xq = *y;
            *x = c * xp - s * xq;
            *y = s * xp + c * xq;
        }
    }
    // Column phase: A <- A J, applied row by row (rows are independent).
    a.par_chunks_mut(n).for_each(|row| {
        for &(p, q, c, s) in rotations {
            let xp = row[p];
            let xq = row[q];
            row[p] = c * xp - s * xq;
            row[q] = s * xp + c * xq;
        }
    });
    // Eigenvector accumulation: V <- V J, same row-wise pattern.
    v.data_mut().par_chunks_mut(n).for_each(|row| {
        for &(p, q, c, s) in rotations {
            let xp = row[p];
            let xq = row[q];
            row[p] = c * xp - s * xq;
            row[q] = s * xp + c * xq;
        }
    });
}

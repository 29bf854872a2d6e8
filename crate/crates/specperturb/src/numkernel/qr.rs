use crate::error::{Error, Result};
use crate::numkernel::Matrix;

/// Thin Householder QR of a tall (rows >= cols) matrix: M = Q R with
/// orthonormal Q columns and upper-triangular R whose diagonal is
/// non-negative. The sign fix makes the factorization unique for
/// full-rank input, which keeps QR-based random orthogonal matrices
/// reproducible.
pub fn householder_qr(m: &Matrix) -> Result<(Matrix, Matrix)> {
    let (rows, cols) = m.dims();
    if rows < cols {
        return Err(Error::DimensionMismatch(format!(
            "QR requires rows >= cols, got {rows} x {cols}"
        )));
    }
    let mut a = m.clone();
    // Householder vectors stored per step: (v, beta) with v[0] = 1 implicit.
    let mut reflectors: Vec<(Vec<f64>, f64)> = Vec::with_capacity(cols);

    for k in 0..cols {
        let mut x: Vec<f64> = (k..rows).map(|i| a.get(i, k)).collect();
        let alpha = x.iter().map(|&v| v * v).sum::<f64>().sqrt();
        let mut beta = 0.0;
        if alpha > 0.0 {
            let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
            x[0] += sign * alpha;
            let vnorm_sq: f64 = x.iter().map(|&v| v * v).sum();
            if vnorm_sq > 0.0 {
                beta = 2.0 / vnorm_sq;
                // Apply reflector to the trailing block.
                for j in k..cols {
                    let mut dotv = 0.0;
                    for (off, &vi) in x.iter().enumerate() {
                        dotv += vi * a.get(k + off, j);
                    }
                    let scale = beta * dotv;
                    for (off, &vi) in x.iter().enumerate() {
                        let cur = a.get(k + off, j);
                        a.set(k + off, j, cur - scale * vi);
                    }
                }
            }
        }
        reflectors.push((x, beta));
    }

    // R is the upper triangle of the reduced matrix.
    let mut r = Matrix::zeros(cols, cols);
    for i in 0..cols {
        for j in i..cols {
            r.set(i, j, a.get(i, j));
        }
    }

    // Accumulate thin Q by applying reflectors to the first cols columns
    // of the identity, in reverse order.
    let mut q = Matrix::zeros(rows, cols);
    for j in 0..cols {
        q.set(j, j, 1.0);
    }
    for k in (0..cols).rev() {
        let (v, beta) = &reflectors[k];
        if *beta == 0.0 {
            continue;
        }
        for j in 0..cols {
            let mut dotv = 0.0;
            for (off, &vi) in v.iter().enumerate() {
                dotv += vi * q.get(k + off, j);
            }
            let scale = beta * dotv;
            for (off, &vi) in v.iter().enumerate() {
                let cur = q.get(k + off, j);
                q.set(k + off, j, cur - scale * vi);
            }
        }
    }

    // Fix signs so diag(R) >= 0.
    for k in 0..cols {
        if r.get(k, k) < 0.0 {
            for j in k..cols {
                let x = r.get(k, j);
                r.set(k, j, -x);
            }
            for i in 0..rows {
                let x = q.get(i, k);
                q.set(i, k, -x);
            }
        }
    }
    Ok((q, r))
}

/// Random orthogonal n x n matrix: QR of a Gaussian matrix with the
/// R-diagonal signs fixed positive (Haar-like, deterministic per seed).
pub fn random_orthogonal(n: usize, rng: &mut crate::numkernel::SeededRng) -> Result<Matrix> {
    let g = crate::numkernel::gaussian_matrix(n, n, rng)?;
    let (q, _) = householder_qr(&g)?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{gaussian_matrix, SeededRng};

    #[test]
    fn qr_reconstructs_and_is_orthonormal() {
        let mut rng = SeededRng::new(31);
        for &(rows, cols) in &[(5, 5), (12, 4), (30, 30), (50, 7)] {
            let m = gaussian_matrix(rows, cols, &mut rng).unwrap();
            let (q, r) = householder_qr(&m).unwrap();
            let qr = q.matmul(&r).unwrap();
            assert!(qr.sub(&m).unwrap().frobenius_norm() <= 1e-10 * m.frobenius_norm());
            let qtq = q.transpose().matmul(&q).unwrap();
            assert!(qtq.sub(&Matrix::identity(cols)).unwrap().frobenius_norm() <= 1e-12);
            for k in 0..cols {
                assert!(r.get(k, k) >= 0.0);
            }
        }
    }

    #[test]
    fn rejects_wide_input() {
        assert!(householder_qr(&Matrix::zeros(2, 5)).is_err());
    }

    #[test]
    fn random_orthogonal_deterministic() {
        let a = random_orthogonal(8, &mut SeededRng::new(4)).unwrap();
        let b = random_orthogonal(8, &mut SeededRng::new(4)).unwrap();
        assert_eq!(a.data(), b.data());
    }
}

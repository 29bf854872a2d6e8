//! Gaussian-kernel graph construction and affinity normalization.
//!
//! The kernel weight between points is W_ij = exp(-||x_i - x_j||^2 / (2 sigma)),
//! with the bandwidth written as `sigma` exactly as it enters that formula.
//! From W we form D (degrees), A = D^{-1/2} W D^{-1/2} and P = D^{-1} W.

use crate::error::{Error, Result};
use crate::numkernel::{dist_sq, Matrix};
use rayon::prelude::*;

/// N points in n dimensions, one per row, with optional ground-truth
/// labels and an optional preset kernel bandwidth.
#[derive(Debug, Clone)]
pub struct DataMatrix {
    pub x: Matrix,
    pub labels: Option<Vec<usize>>,
    pub sigma: Option<f64>,
}

impl DataMatrix {
    pub fn new(x: Matrix, labels: Option<Vec<usize>>, sigma: Option<f64>) -> Result<Self> {
        if x.rows() < 2 {
            return Err(Error::InvalidParam(format!(
                "need at least 2 points, got {}",
                x.rows()
            )));
        }
        if let Some(ref l) = labels {
            if l.len() != x.rows() {
                return Err(Error::DimensionMismatch(format!(
                    "{} labels for {} points",
                    l.len(),
                    x.rows()
                )));
            }
            if let Some(&bad) = l.iter().find(|&&v| v >= x.rows()) {
                return Err(Error::InvalidParam(format!(
                    "label {bad} out of range for {} points",
                    x.rows()
                )));
            }
        }
        if let Some(s) = sigma {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::InvalidParam(format!("sigma must be positive, got {s}")));
            }
        }
        Ok(Self { x, labels, sigma })
    }

    pub fn n_points(&self) -> usize {
        self.x.rows()
    }

    pub fn dim(&self) -> usize {
        self.x.cols()
    }

    /// Resolves the kernel bandwidth: an explicit override wins, then the
    /// preset field, then the median pairwise squared distance.
    pub fn resolve_sigma(&self, explicit: Option<f64>) -> Result<f64> {
        let s = match explicit.or(self.sigma) {
            Some(s) => s,
            None => median_sq_distance(&self.x)?,
        };
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidParam(format!(
                "resolved sigma must be positive and finite, got {s}"
            )));
        }
        Ok(s)
    }
}

/// Kernel matrix, degrees, symmetric normalization and random-walk matrix.
#[derive(Debug, Clone)]
pub struct AffinityPack {
    pub w: Matrix,
    pub degrees: Vec<f64>,
    pub a: Matrix,
    pub p: Matrix,
}

/// W_ij = exp(-||x_i - x_j||^2 / (2 sigma)). Symmetric with unit diagonal;
/// the kernel weight of a point with itself is kept (self-loops retained).
pub fn gaussian_kernel(data: &DataMatrix, sigma: f64) -> Result<Matrix> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParam(format!("sigma must be positive, got {sigma}")));
    }
    let n = data.n_points();
    let x = &data.x;
    let inv = 1.0 / (2.0 * sigma);
    let mut w = Matrix::zeros(n, n);
    // Fill the upper triangle in parallel over rows, then mirror, so the
    // result is exactly symmetric.
    w.data_mut()
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(i, row)| {
            row[i] = 1.0;
            let xi = x.row(i);
            for j in (i + 1)..n {
                row[j] = (-dist_sq(xi, x.row(j)) * inv).exp();
            }
        });
    for i in 0..n {
        for j in (i + 1)..n {
            let v = w.get(i, j);
            w.set(j, i, v);
        }
    }
    Ok(w)
}

/// Degree normalization of a symmetric non-negative weight matrix:
/// A = D^{-1/2} W D^{-1/2}, P = D^{-1} W with D_ii = sum_k W_ik.
/// Rows with zero weight sum (isolated vertices) are rejected.
pub fn normalize_affinity(w: &Matrix) -> Result<AffinityPack> {
    w.check_symmetric(1e-12)?;
    let n = w.rows();
    for i in 0..n {
        for j in 0..n {
            if w.get(i, j) < 0.0 {
                return Err(Error::NegativeWeight(i, j));
            }
        }
    }
    let degrees: Vec<f64> = (0..n).map(|i| w.row(i).iter().sum()).collect();
    if let Some(i) = degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::ZeroDegreeRow(i));
    }
    let inv_sqrt: Vec<f64> = degrees.iter().map(|&d| 1.0 / d.sqrt()).collect();
    let mut a = Matrix::zeros(n, n);
    let mut p = Matrix::zeros(n, n);
    for i in 0..n {
        let wr = w.row(i);
        let ar = a.row_mut(i);
        let di = inv_sqrt[i];
        for j in 0..n {
            ar[j] = wr[j] * di * inv_sqrt[j];
        }
    }
    // Make A exactly symmetric against rounding differences in i/j order.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = a.get(i, j);
            a.set(j, i, v);
        }
    }
    for i in 0..n {
        let wr = w.row(i);
        let pr = p.row_mut(i);
        let inv_d = 1.0 / degrees[i];
        for j in 0..n {
            pr[j] = wr[j] * inv_d;
        }
    }
    Ok(AffinityPack { w: w.clone(), degrees, a, p })
}

/// The full perturbed pipeline: kernel of the (perturbed) data, then
/// normalization. Identical code path to the unperturbed case.
pub fn perturbed_affinity(data: &DataMatrix, sigma: f64) -> Result<AffinityPack> {
    let w = gaussian_kernel(data, sigma)?;
    normalize_affinity(&w)
}

/// Median of the N(N-1)/2 pairwise squared distances (average of the two
/// middle values for an even count). The default bandwidth heuristic.
pub fn median_sq_distance(x: &Matrix) -> Result<f64> {
    let n = x.rows();
    if n < 2 {
        return Err(Error::InvalidParam("need at least 2 points".to_string()));
    }
    let mut dists: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            dists.push(dist_sq(x.row(i), x.row(j)));
        }
    }
    dists.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    let m = dists.len();
    let med = if m % 2 == 1 {
        dists[m / 2]
    } else {
        0.5 * (dists[m / 2 - 1] + dists[m / 2])
    };
    Ok(med)
}

/// Largest squared pairwise distance, used by the measurement bound.
pub fn max_sq_distance(x: &Matrix) -> f64 {
    let n = x.rows();
    let per_row: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = x.row(i);
            ((i + 1)..n)
                .map(|j| dist_sq(xi, x.row(j)))
                .fold(0.0f64, f64::max)
        })
        .collect();
    per_row.into_iter().fold(0.0f64, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{gaussian_matrix, sym_eig, SeededRng};

    fn data(rows: Vec<Vec<f64>>) -> DataMatrix {
        DataMatrix::new(Matrix::from_rows(rows).unwrap(), None, None).unwrap()
    }

    #[test]
    fn identical_points_give_unit_kernel() {
        let d = data(vec![vec![1.0, 2.0], vec![1.0, 2.0]]);
        let w = gaussian_kernel(&d, 1.0).unwrap();
        for &v in w.data() {
            assert_eq!(v, 1.0);
        }
    }

    #[test]
    fn kernel_value_at_two_sigma_sq_distance() {
        // ||x1 - x2||^2 = 2 sigma gives W_12 = exp(-1).
        let sigma = 3.0f64;
        let gap = (2.0 * sigma).sqrt();
        let d = data(vec![vec![0.0], vec![gap]]);
        let w = gaussian_kernel(&d, sigma).unwrap();
        assert!((w.get(0, 1) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((w.get(0, 1) - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn huge_sigma_saturates_kernel() {
        let d = data(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 0.5]]);
        let w = gaussian_kernel(&d, 1e9).unwrap();
        for &v in w.data() {
            assert!((v - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_nonpositive_sigma() {
        let d = data(vec![vec![0.0], vec![1.0]]);
        assert!(gaussian_kernel(&d, 0.0).is_err());
        assert!(gaussian_kernel(&d, -1.0).is_err());
    }

    #[test]
    fn normalize_ones_block() {
        let w = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let pack = normalize_affinity(&w).unwrap();
        assert_eq!(pack.degrees, vec![2.0, 2.0]);
        for &v in pack.a.data() {
            assert!((v - 0.5).abs() < 1e-15);
        }
        for &v in pack.p.data() {
            assert!((v - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn normalize_identity_is_identity() {
        let pack = normalize_affinity(&Matrix::identity(3)).unwrap();
        assert_eq!(pack.a.data(), Matrix::identity(3).data());
        assert_eq!(pack.p.data(), Matrix::identity(3).data());
    }

    #[test]
    fn hand_evaluated_two_point_affinity() {
        // W = [[1, e^-1], [e^-1, 1]]: A_12 = e^-1 / (1 + e^-1).
        let e1 = (-1.0f64).exp();
        let w = Matrix::from_rows(vec![vec![1.0, e1], vec![e1, 1.0]]).unwrap();
        let pack = normalize_affinity(&w).unwrap();
        let expect = e1 / (1.0 + e1);
        assert!((pack.a.get(0, 1) - expect).abs() < 1e-15);
        assert!((pack.a.get(0, 1) - 0.268941).abs() < 1e-6);
    }

    #[test]
    fn zero_row_rejected() {
        let w = Matrix::from_rows(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert!(matches!(normalize_affinity(&w), Err(Error::ZeroDegreeRow(1))));
    }

    #[test]
    fn perturbed_identity_path_matches() {
        let mut rng = SeededRng::new(11);
        let x = gaussian_matrix(8, 3, &mut rng).unwrap();
        let d = DataMatrix::new(x, None, None).unwrap();
        let sigma = d.resolve_sigma(None).unwrap();
        let direct = normalize_affinity(&gaussian_kernel(&d, sigma).unwrap()).unwrap();
        let via = perturbed_affinity(&d, sigma).unwrap();
        assert_eq!(direct.a.data(), via.a.data());
    }

    #[test]
    fn rotation_leaves_affinity_unchanged() {
        let mut rng = SeededRng::new(13);
        let x = gaussian_matrix(10, 4, &mut rng).unwrap();
        let q = crate::numkernel::random_orthogonal(4, &mut rng).unwrap();
        let xr = x.matmul(&q.transpose()).unwrap();
        let da = DataMatrix::new(x, None, None).unwrap();
        let db = DataMatrix::new(xr, None, None).unwrap();
        let pa = perturbed_affinity(&da, 2.0).unwrap();
        let pb = perturbed_affinity(&db, 2.0).unwrap();
        assert!(pa.a.max_abs_diff(&pb.a).unwrap() < 1e-12);
    }

    #[test]
    fn affinity_spectral_invariants() {
        // Perron vector D^{1/2} 1 has eigenvalue 1; spectrum within [-1, 1];
        // entries of A at most 1; P row sums equal 1.
        let mut rng = SeededRng::new(21);
        for _ in 0..5 {
            let x = gaussian_matrix(12, 3, &mut rng).unwrap();
            let d = DataMatrix::new(x, None, None).unwrap();
            let sigma = d.resolve_sigma(None).unwrap();
            let pack = perturbed_affinity(&d, sigma).unwrap();
            let n = pack.a.rows();

            let mut perron: Vec<f64> = pack.degrees.iter().map(|&d| d.sqrt()).collect();
            let nrm = crate::numkernel::norm2(&perron);
            perron.iter_mut().for_each(|v| *v /= nrm);
            for i in 0..n {
                let av: f64 = (0..n).map(|j| pack.a.get(i, j) * perron[j]).sum();
                assert!((av - perron[i]).abs() <= 1e-10);
            }

            let eig = sym_eig(&pack.a).unwrap();
            assert!((eig.eigenvalues[0] - 1.0).abs() <= 1e-10);
            for &l in &eig.eigenvalues {
                assert!(l <= 1.0 + 1e-10 && l >= -1.0 - 1e-10);
            }
            for &v in pack.a.data() {
                assert!(v <= 1.0 + 1e-12);
            }
            for i in 0..n {
                let sum: f64 = pack.p.row(i).iter().sum();
                assert!((sum - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn median_bandwidth() {
        let x = Matrix::from_rows(vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        // Pairwise squared distances: 1, 9, 4 -> median 4.
        assert_eq!(median_sq_distance(&x).unwrap(), 4.0);
        let d = DataMatrix::new(x, None, None).unwrap();
        assert_eq!(d.resolve_sigma(None).unwrap(), 4.0);
        assert_eq!(d.resolve_sigma(Some(2.5)).unwrap(), 2.5);
    }
}

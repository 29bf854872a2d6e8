//! Compressed-sensing measurement of data rows and empirical restricted
//! isometry constants.
//!
//! The applied operator is always (1/sqrt(m)) Phi. Instead of certifying a
//! restricted isometry constant probabilistically, `empirical_rip_delta`
//! measures the tightest delta that makes the quadratic isometry property
//! hold on the actual difference vectors of a dataset; the affinity bound
//! only ever consumes the property on those observed pairs, so the
//! empirical constant yields a fully checkable inequality.

use crate::affinity::DataMatrix;
use crate::error::{Error, Result};
use crate::numkernel::{dist_sq, gaussian_matrix, Matrix, SeededRng};
use rayon::prelude::*;

/// An m x n Gaussian measurement ensemble, persisted as (m, n, seed).
#[derive(Debug, Clone)]
pub struct MeasurementOperator {
    pub phi: Matrix,
    pub m: usize,
    pub n: usize,
    /// Normalization applied alongside phi, 1/sqrt(m).
    pub scale: f64,
    pub seed: u64,
}

impl MeasurementOperator {
    /// Standard normal entries drawn from the given seed.
    pub fn gaussian(m: usize, n: usize, seed: u64) -> Result<Self> {
        let mut rng = SeededRng::new(seed);
        let phi = gaussian_matrix(m, n, &mut rng)?;
        Ok(Self { phi, m, n, scale: 1.0 / (m as f64).sqrt(), seed })
    }

    /// Exact identity operator (phi = sqrt(n) I so that scale * phi = I),
    /// for tests and as the zero-distortion reference.
    pub fn identity(n: usize) -> Self {
        let root = (n as f64).sqrt();
        let phi = Matrix::identity(n).scaled(root);
        Self { phi, m: n, n, scale: 1.0 / root, seed: 0 }
    }

    /// Applies (1/sqrt(m)) Phi to a single vector.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.m)
            .map(|i| {
                let row = self.phi.row(i);
                row.iter().zip(x.iter()).map(|(&p, &v)| p * v).sum::<f64>() * self.scale
            })
            .collect()
    }
}

/// Measures every data row: output row i = (1/sqrt(m)) Phi x_i.
/// Labels are carried through unchanged; any preset bandwidth is dropped
/// because distances change scale under measurement.
pub fn measure(data: &DataMatrix, op: &MeasurementOperator) -> Result<DataMatrix> {
    if op.n != data.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator expects dimension {}, data has {}",
            op.n,
            data.dim()
        )));
    }
    let n_points = data.n_points();
    let mut out = Matrix::zeros(n_points, op.m);
    let rows: Vec<Vec<f64>> = (0..n_points)
        .into_par_iter()
        .map(|i| op.apply(data.x.row(i)))
        .collect();
    for (i, row) in rows.into_iter().enumerate() {
        out.row_mut(i).copy_from_slice(&row);
    }
    DataMatrix::new(out, data.labels.clone(), None)
}

/// The tightest empirical restricted isometry constant on a dataset.
#[derive(Debug, Clone)]
pub struct RipEstimate {
    /// max over distinct pairs of | ||measured diff||^2 / ||diff||^2 - 1 |.
    pub delta_emp: f64,
    pub worst_pair: (usize, usize),
    pub pairs_checked: usize,
    /// Pairs skipped because the difference vector was zero.
    pub zero_pairs_skipped: usize,
}

/// Scans all point pairs and reports the largest squared-distance
/// distortion of the measured data relative to the original. The measured
/// rows are computed with `measure`, i.e. exactly the vectors any
/// downstream affinity would be built from.
pub fn empirical_rip_delta(data: &DataMatrix, op: &MeasurementOperator) -> Result<RipEstimate> {
    let measured = measure(data, op)?;
    empirical_rip_delta_from_measured(data, &measured)
}

/// Same scan, reusing an existing measured dataset.
pub fn empirical_rip_delta_from_measured(
    data: &DataMatrix,
    measured: &DataMatrix,
) -> Result<RipEstimate> {
    let n = data.n_points();
    if measured.n_points() != n {
        return Err(Error::DimensionMismatch(format!(
            "measured set has {} rows, original {}",
            measured.n_points(),
            n
        )));
    }
    // Per-row scan in parallel; the final reduction is a sequential pass
    // over row results in index order, so ties resolve deterministically.
    let per_row: Vec<(f64, (usize, usize), usize, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = data.x.row(i);
            let mi = measured.x.row(i);
            let mut best = -1.0f64;
            let mut pair = (i, i);
            let mut checked = 0usize;
            let mut skipped = 0usize;
            for j in (i + 1)..n {
                let d = dist_sq(xi, data.x.row(j));
                if d == 0.0 {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                let dm = dist_sq(mi, measured.x.row(j));
                let dev = (dm / d - 1.0).abs();
                if dev > best {
                    best = dev;
                    pair = (i, j);
                }
            }
            (best, pair, checked, skipped)
        })
        .collect();
    let mut delta_emp = -1.0f64;
    let mut worst_pair = (0, 0);
    let mut pairs_checked = 0;
    let mut zero_pairs_skipped = 0;
    for (best, pair, checked, skipped) in per_row {
        pairs_checked += checked;
        zero_pairs_skipped += skipped;
        if best > delta_emp {
            delta_emp = best;
            worst_pair = pair;
        }
    }
    if pairs_checked == 0 {
        return Err(Error::NoValidPairs);
    }
    Ok(RipEstimate { delta_emp, worst_pair, pairs_checked, zero_pairs_skipped })
}

/// Number of Gaussian measurements sufficient for distortion `eps` on
/// differences of s-sparse vectors: ceil(c * (2s/eps^2) * ln(n/(eps^2 2s))),
/// clamped into [1, n]. Difference vectors of s-sparse points are 2s-sparse,
/// hence the 2s. The leading constant is not pinned down by the theory and
/// is exposed as `c`.
pub fn required_measurements(s: usize, n: usize, eps: f64, c: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParam(format!("eps must be in (0,1), got {eps}")));
    }
    if s == 0 || n <= s {
        return Err(Error::InvalidParam(format!("need 0 < s < n, got s={s}, n={n}")));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidParam(format!("c must be positive, got {c}")));
    }
    let two_s = 2.0 * s as f64;
    let log_arg = n as f64 / (eps * eps * two_s);
    let raw = c * (two_s / (eps * eps)) * log_arg.ln();
    let m = raw.ceil();
    let m = if m.is_finite() && m >= 1.0 { m as usize } else { 1 };
    Ok(m.clamp(1, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::norm2;

    fn toy_data(rows: Vec<Vec<f64>>) -> DataMatrix {
        DataMatrix::new(Matrix::from_rows(rows).unwrap(), None, None).unwrap()
    }

    #[test]
    fn identity_operator_preserves_distances() {
        let data = toy_data(vec![vec![1.0, 2.0, 3.0], vec![-1.0, 0.5, 2.0], vec![0.0, 0.0, 0.0]]);
        let op = MeasurementOperator::identity(3);
        let out = measure(&data, &op).unwrap();
        assert!(out.x.max_abs_diff(&data.x).unwrap() < 1e-15);
        let rip = empirical_rip_delta(&data, &op).unwrap();
        assert!(rip.delta_emp < 1e-15);
        assert_eq!(rip.pairs_checked, 3);
    }

    #[test]
    fn zero_vector_measures_to_zero() {
        let data = toy_data(vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
        let op = MeasurementOperator::gaussian(5, 2, 3).unwrap();
        let out = measure(&data, &op).unwrap();
        assert!(out.x.row(0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn measurement_energy_unbiased() {
        // Monte Carlo oracle: E ||(1/sqrt m) Phi x||^2 = ||x||^2, so the
        // mean over 500 seeds must land within 10%.
        let x = vec![1.0, -2.0, 0.5, 3.0];
        let norm_sq = x.iter().map(|v| v * v).sum::<f64>();
        let mut acc = 0.0;
        for seed in 0..500u64 {
            let op = MeasurementOperator::gaussian(6, 4, seed).unwrap();
            let y = op.apply(&x);
            acc += norm2(&y).powi(2);
        }
        let mean = acc / 500.0;
        assert!(
            (mean - norm_sq).abs() <= 0.1 * norm_sq,
            "mean energy {mean} vs {norm_sq}"
        );
    }

    #[test]
    fn labels_carried_through() {
        let data = DataMatrix::new(
            Matrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
            Some(vec![1, 0]),
            Some(2.0),
        )
        .unwrap();
        let op = MeasurementOperator::gaussian(3, 2, 9).unwrap();
        let out = measure(&data, &op).unwrap();
        assert_eq!(out.labels, Some(vec![1, 0]));
        assert_eq!(out.sigma, None);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let data = toy_data(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let op = MeasurementOperator::gaussian(3, 5, 1).unwrap();
        assert!(measure(&data, &op).is_err());
    }

    #[test]
    fn two_point_delta_is_exact() {
        let data = toy_data(vec![vec![1.0, 0.0, 2.0], vec![0.0, 1.0, -1.0]]);
        let op = MeasurementOperator::gaussian(4, 3, 5).unwrap();
        let rip = empirical_rip_delta(&data, &op).unwrap();
        let measured = measure(&data, &op).unwrap();
        let d = dist_sq(data.x.row(0), data.x.row(1));
        let dm = dist_sq(measured.x.row(0), measured.x.row(1));
        assert!((rip.delta_emp - (dm / d - 1.0).abs()).abs() < 1e-15);
        assert_eq!(rip.worst_pair, (0, 1));
    }

    #[test]
    fn delta_matches_brute_force_rescan() {
        // Independent sequential re-scan of the defining maximum.
        let mut rng = SeededRng::new(33);
        let x = gaussian_matrix(12, 6, &mut rng).unwrap();
        let data = DataMatrix::new(x, None, None).unwrap();
        let op = MeasurementOperator::gaussian(4, 6, 77).unwrap();
        let rip = empirical_rip_delta(&data, &op).unwrap();
        let measured = measure(&data, &op).unwrap();
        let mut brute = -1.0f64;
        for i in 0..12 {
            for j in (i + 1)..12 {
                let d = dist_sq(data.x.row(i), data.x.row(j));
                if d == 0.0 {
                    continue;
                }
                let dm = dist_sq(measured.x.row(i), measured.x.row(j));
                brute = brute.max((dm / d - 1.0).abs());
            }
        }
        assert_eq!(rip.delta_emp, brute);
        // And the quadratic isometry property holds with this delta.
        for i in 0..12 {
            for j in (i + 1)..12 {
                let d = dist_sq(data.x.row(i), data.x.row(j));
                let dm = dist_sq(measured.x.row(i), measured.x.row(j));
                assert!(dm >= (1.0 - rip.delta_emp) * d - 1e-12);
                assert!(dm <= (1.0 + rip.delta_emp) * d + 1e-12);
            }
        }
    }

    #[test]
    fn identical_rows_skipped_or_rejected() {
        let data = toy_data(vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![0.0, 0.0]]);
        let op = MeasurementOperator::gaussian(2, 2, 1).unwrap();
        let rip = empirical_rip_delta(&data, &op).unwrap();
        assert_eq!(rip.zero_pairs_skipped, 1);
        assert_eq!(rip.pairs_checked, 2);

        let all_same = toy_data(vec![vec![2.0, 2.0], vec![2.0, 2.0]]);
        assert!(matches!(
            empirical_rip_delta(&all_same, &op),
            Err(Error::NoValidPairs)
        ));
    }

    #[test]
    fn delta_shrinks_with_more_measurements() {
        // Concentration oracle: the seed-averaged delta must decrease
        // strictly as m grows 16 -> 1024 on fixed data.
        let mut rng = SeededRng::new(100);
        let x = gaussian_matrix(10, 64, &mut rng).unwrap();
        let data = DataMatrix::new(x, None, None).unwrap();
        let mut prev = f64::INFINITY;
        for &m in &[16usize, 64, 256, 1024] {
            let mut acc = 0.0;
            for seed in 0..20u64 {
                let op = MeasurementOperator::gaussian(m, 64, 1000 + seed).unwrap();
                acc += empirical_rip_delta(&data, &op).unwrap().delta_emp;
            }
            let mean = acc / 20.0;
            assert!(mean < prev, "mean delta {mean} did not shrink at m={m}");
            prev = mean;
        }
    }

    #[test]
    fn required_measurements_examples() {
        // ceil(24 ln(100/1.5)) = ceil(100.79...) = 101, clamped to n = 100.
        assert_eq!(required_measurements(3, 100, 0.5, 1.0).unwrap(), 100);
        // Near-unity eps gives a small positive count.
        let m = required_measurements(1, 10, 0.999, 1.0).unwrap();
        assert!(m >= 1);
        // Doubling c doubles the pre-clamp count.
        let base = required_measurements(2, 100_000, 0.5, 1.0).unwrap();
        let doubled = required_measurements(2, 100_000, 0.5, 2.0).unwrap();
        assert!(doubled >= 2 * base - 2 && doubled <= 2 * base + 2);
        // Invalid ranges rejected.
        assert!(required_measurements(3, 100, 0.0, 1.0).is_err());
        assert!(required_measurements(3, 100, 1.0, 1.0).is_err());
        assert!(required_measurements(0, 100, 0.5, 1.0).is_err());
        assert!(required_measurements(100, 100, 0.5, 1.0).is_err());
    }

    #[test]
    fn measurement_deterministic() {
        let data = toy_data(vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![-1.0, 0.0]]);
        let op1 = MeasurementOperator::gaussian(3, 2, 42).unwrap();
        let op2 = MeasurementOperator::gaussian(3, 2, 42).unwrap();
        assert_eq!(op1.phi.data(), op2.phi.data());
        let a = measure(&data, &op1).unwrap();
        let b = measure(&data, &op2).unwrap();
        assert_eq!(a.x.data(), b.x.data());
        let r1 = empirical_rip_delta(&data, &op1).unwrap();
        let r2 = empirical_rip_delta(&data, &op2).unwrap();
        assert_eq!(r1.delta_emp, r2.delta_emp);
        assert_eq!(r1.worst_pair, r2.worst_pair);
    }
}

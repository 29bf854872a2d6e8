//! Nuclear-norm matrix completion by iterative singular-value
//! soft-thresholding (soft-impute) with warm starts across a decreasing
//! lambda schedule.
//!
//! Each step replaces the observed entries of the current iterate with
//! their observed values and soft-thresholds the singular values of the
//! result. Small problems use the dense SVD kernel directly. Large
//! problems keep the iterate in factored low-rank form plus the sparse
//! observed residual, and compute the thresholded SVD by deterministic
//! block subspace iteration with Rayleigh-Ritz extraction; the block is
//! grown until the smallest retained singular value falls below lambda.

use crate::error::{Error, Result};
use crate::numkernel::{householder_qr, svd, Matrix, SeededRng};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 500;
pub const DEFAULT_SCHEDULE_STEPS: usize = 10;
pub const DEFAULT_LAMBDA_MIN_RATIO: f64 = 1e-4;

/// Problems up to this many entries use the dense SVD path.
const DENSE_AREA_LIMIT: usize = 160_000;
/// Hard cap on the factored rank tracked by the iterative path.
const MAX_RANK: usize = 150;
const SUBSPACE_MAX_ITER: usize = 50;
/// With a warm-started subspace a few iterations per thresholding step
/// suffice; the outer soft-impute loop absorbs the remaining inexactness.
const SUBSPACE_WARM_ITER: usize = 4;
const SUBSPACE_RITZ_TOL: f64 = 1e-7;

/// Set of observed entry locations of an N x n matrix.
#[derive(Debug, Clone)]
pub struct ObservationMask {
    shape: (usize, usize),
    entries: Vec<(usize, usize)>,
    p: f64,
}

impl ObservationMask {
    /// Entries are canonicalized to row-major order; duplicates and
    /// out-of-range indices are rejected.
    pub fn new(shape: (usize, usize), mut entries: Vec<(usize, usize)>) -> Result<Self> {
        let (rows, cols) = shape;
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        for &(i, j) in &entries {
            if i >= rows || j >= cols {
                return Err(Error::MaskOutOfRange(i, j, rows, cols));
            }
        }
        entries.sort_unstable();
        for w in entries.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateMaskEntry(w[0].0, w[0].1));
            }
        }
        let p = entries.len() as f64 / (rows * cols) as f64;
        Ok(Self { shape, entries, p })
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Observed fraction |entries| / (N n).
    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Each entry of a mask included independently with probability p.
pub fn sample_mask(rows: usize, cols: usize, p: f64, rng: &mut SeededRng) -> Result<ObservationMask> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParam(format!("p must be in (0,1], got {p}")));
    }
    let expected = p * (rows * cols) as f64;
    if expected < 1.0 {
        return Err(Error::InvalidParam(format!(
            "expected observation count p*N*n = {expected} is below 1"
        )));
    }
    let mut entries = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if rng.next_f64() < p {
                entries.push((i, j));
            }
        }
    }
    ObservationMask::new((rows, cols), entries)
}

/// Observed entry values attached to a mask.
#[derive(Debug, Clone)]
pub struct PartialMatrix {
    pub mask: ObservationMask,
    pub values: Vec<f64>,
}

impl PartialMatrix {
    pub fn new(mask: ObservationMask, values: Vec<f64>) -> Result<Self> {
        if values.len() != mask.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} mask entries",
                values.len(),
                mask.len()
            )));
        }
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            let (i, j) = mask.entries()[idx];
            return Err(Error::NonFinite(i, j));
        }
        Ok(Self { mask, values })
    }

    /// Restriction P_Omega(X) of a full matrix to the mask.
    pub fn observe(x: &Matrix, mask: ObservationMask) -> Result<Self> {
        if mask.shape() != x.dims() {
            return Err(Error::DimensionMismatch(format!(
                "mask shape {:?} vs matrix {:?}",
                mask.shape(),
                x.dims()
            )));
        }
        let values = mask.entries().iter().map(|&(i, j)| x.get(i, j)).collect();
        Self::new(mask, values)
    }

    /// Dense matrix with unobserved entries zero.
    pub fn to_dense_zero_filled(&self) -> Matrix {
        let (rows, cols) = self.mask.shape();
        let mut m = Matrix::zeros(rows, cols);
        for (&(i, j), &v) in self.mask.entries().iter().zip(&self.values) {
            m.set(i, j, v);
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct CompletionResult {
    pub xhat: Matrix,
    /// Total inner iterations across the whole schedule.
    pub iterations: usize,
    pub lambda_final: f64,
    /// ||P_Omega(Xhat) - P_Omega(M)||_F.
    pub observed_residual: f64,
    pub converged: bool,
    /// Observed residual at the end of each lambda segment.
    pub schedule_residuals: Vec<f64>,
}

/// Right-hand side of the noisy completion recovery bound,
/// 4 sqrt((2+p) min(N,n) / p) delta + 2 delta.
pub fn completion_error_bound(p: f64, rows: usize, cols: usize, delta_noise: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParam(format!("p must be in (0,1], got {p}")));
    }
    if delta_noise < 0.0 {
        return Err(Error::InvalidParam(format!(
            "noise level must be non-negative, got {delta_noise}"
        )));
    }
    let min_dim = rows.min(cols) as f64;
    Ok(4.0 * ((2.0 + p) * min_dim / p).sqrt() * delta_noise + 2.0 * delta_noise)
}

/// Geometric schedule from sigma_1/2 down to 1e-4 sigma_1 in ten steps,
/// where sigma_1 is the top singular value of the zero-filled observed
/// matrix (estimated by deterministic power iteration).
pub fn default_lambda_schedule(observed: &PartialMatrix) -> Vec<f64> {
    let sigma1 = top_singular_value(observed);
    if sigma1 <= 0.0 {
        return vec![1.0];
    }
    geometric_schedule(sigma1 * 0.5, sigma1 * DEFAULT_LAMBDA_MIN_RATIO, DEFAULT_SCHEDULE_STEPS)
}

pub fn geometric_schedule(from: f64, to: f64, steps: usize) -> Vec<f64> {
    assert!(from >= to && to > 0.0 && steps >= 1);
    if steps == 1 {
        return vec![to];
    }
    let ratio = (to / from).powf(1.0 / (steps as f64 - 1.0));
    (0..steps).map(|i| from * ratio.powi(i as i32)).collect()
}

fn top_singular_value(observed: &PartialMatrix) -> f64 {
    let (_, cols) = observed.mask.shape();
    let entries = observed.mask.entries();
    let vals = &observed.values;
    let mut v = vec![1.0 / (cols as f64).sqrt(); cols];
    let mut sigma = 0.0;
    for _ in 0..60 {
        let (rows_n, _) = observed.mask.shape();
        let mut u = vec![0.0; rows_n];
        for (&(i, j), &val) in entries.iter().zip(vals) {
            u[i] += val * v[j];
        }
        let un: f64 = u.iter().map(|&x| x * x).sum::<f64>().sqrt();
        if un == 0.0 {
            return 0.0;
        }
        u.iter_mut().for_each(|x| *x /= un);
        let mut w = vec![0.0; cols];
        for (&(i, j), &val) in entries.iter().zip(vals) {
            w[j] += val * u[i];
        }
        sigma = w.iter().map(|&x| x * x).sum::<f64>().sqrt();
        if sigma == 0.0 {
            return 0.0;
        }
        v = w.iter().map(|&x| x / sigma).collect();
    }
    sigma
}

/// Iterates X <- SVT_lambda(P_Omega(M) + P_Omega_perp(X)) through the
/// lambda schedule with warm starts. Non-convergence within `max_iter`
/// inner steps for the final lambda is reported via `converged`, not as
/// an error.
pub fn soft_impute(
    observed: &PartialMatrix,
    lambda_schedule: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<CompletionResult> {
    if observed.mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    if lambda_schedule.is_empty() {
        return Err(Error::InvalidParam("empty lambda schedule".to_string()));
    }
    for w in lambda_schedule.windows(2) {
        if w[1] > w[0] {
            return Err(Error::InvalidParam("lambda schedule must be non-increasing".to_string()));
        }
    }
    if let Some(&bad) = lambda_schedule.iter().find(|&&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidParam(format!("lambda values must be positive, got {bad}")));
    }
    if !(tol >= 0.0) || max_iter == 0 {
        return Err(Error::InvalidParam("tol must be >= 0 and max_iter >= 1".to_string()));
    }

    let (rows, cols) = observed.mask.shape();
    if rows * cols <= DENSE_AREA_LIMIT {
        soft_impute_dense(observed, lambda_schedule, tol, max_iter)
    } else {
        soft_impute_factored(observed, lambda_schedule, tol, max_iter)
    }
}

fn observed_residual_dense(x: &Matrix, observed: &PartialMatrix) -> f64 {
    observed
        .mask
        .entries()
        .iter()
        .zip(&observed.values)
        .map(|(&(i, j), &v)| {
            let d = x.get(i, j) - v;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn soft_impute_dense(
    observed: &PartialMatrix,
    schedule: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<CompletionResult> {
    let (rows, cols) = observed.mask.shape();
    let mut x = Matrix::zeros(rows, cols);
    let mut iterations = 0;
    let mut converged = true;
    let mut schedule_residuals = Vec::with_capacity(schedule.len());

    for &lambda in schedule {
        converged = false;
        for _ in 0..max_iter {
            iterations += 1;
            // Y = P_Omega(M) + P_Omega_perp(X)
            let mut y = x.clone();
            for (&(i, j), &v) in observed.mask.entries().iter().zip(&observed.values) {
                y.set(i, j, v);
            }
            let dec = svd(&y)?;
            let kept: Vec<(usize, f64)> = dec
                .singular_values
                .iter()
                .enumerate()
                .filter_map(|(i, &s)| (s > lambda).then_some((i, s - lambda)))
                .collect();
            let mut x_new = Matrix::zeros(rows, cols);
            for i in 0..rows {
                let urow = dec.u.row(i);
                let out = x_new.row_mut(i);
                for &(idx, s) in &kept {
                    let us = urow[idx] * s;
                    for (o, vj) in out.iter_mut().zip(0..cols) {
                        *o += us * dec.v.get(vj, idx);
                    }
                }
            }
            let diff = x_new.sub(&x)?.frobenius_norm();
            let denom = x.frobenius_norm().max(f64::MIN_POSITIVE);
            x = x_new;
            if diff / denom <= tol {
                converged = true;
                break;
            }
        }
        schedule_residuals.push(observed_residual_dense(&x, observed));
    }

    let observed_residual = observed_residual_dense(&x, observed);
    Ok(CompletionResult {
        xhat: x,
        iterations,
        lambda_final: *schedule.last().expect("non-empty"),
        observed_residual,
        converged,
        schedule_residuals,
    })
}

/// Low-rank factor X = U diag(s) V^T. Rank zero means X = 0.
struct Factored {
    u: Matrix,
    s: Vec<f64>,
    v: Matrix,
    rank: usize,
}

impl Factored {
    fn zero(rows: usize, cols: usize) -> Self {
        Self { u: Matrix::zeros(rows, 1), s: Vec::new(), v: Matrix::zeros(cols, 1), rank: 0 }
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        let urow = self.u.row(i);
        let vrow = self.v.row(j);
        (0..self.rank).map(|r| urow[r] * self.s[r] * vrow[r]).sum()
    }

    fn norm_sq(&self) -> f64 {
        self.s.iter().map(|&s| s * s).sum()
    }

    fn inner_product(&self, other: &Factored) -> f64 {
        if self.rank == 0 || other.rank == 0 {
            return 0.0;
        }
        // tr((U_a^T U_b) S_b (V_b^T V_a) S_a)
        let mu = tr_matmul(&self.u, &other.u, self.rank, other.rank);
        let mv = tr_matmul(&other.v, &self.v, other.rank, self.rank);
        let mut acc = 0.0;
        for a in 0..self.rank {
            for b in 0..other.rank {
                acc += mu[a * other.rank + b] * other.s[b] * mv[b * self.rank + a] * self.s[a];
            }
        }
        acc
    }

    fn to_dense(&self) -> Matrix {
        let rows = self.u.rows();
        let cols = self.v.rows();
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            let urow = self.u.row(i);
            let orow = out.row_mut(i);
            for r in 0..self.rank {
                let us = urow[r] * self.s[r];
                if us == 0.0 {
                    continue;
                }
                for j in 0..cols {
                    orow[j] += us * self.v.get(j, r);
                }
            }
        }
        out
    }
}

/// a^T b restricted to the leading ra/rb columns, returned row-major ra x rb.
fn tr_matmul(a: &Matrix, b: &Matrix, ra: usize, rb: usize) -> Vec<f64> {
    let rows = a.rows();
    let mut out = vec![0.0; ra * rb];
    for i in 0..rows {
        let arow = a.row(i);
        let brow = b.row(i);
        for p in 0..ra {
            let ap = arow[p];
            if ap == 0.0 {
                continue;
            }
            for q in 0..rb {
                out[p * rb + q] += ap * brow[q];
            }
        }
    }
    out
}

fn soft_impute_factored(
    observed: &PartialMatrix,
    schedule: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<CompletionResult> {
    let (rows, cols) = observed.mask.shape();
    let entries = observed.mask.entries();
    let vals = &observed.values;
    let mut x = Factored::zero(rows, cols);
    // Residual on observed entries: M - X there.
    let mut resid: Vec<f64> = vals.clone();
    let mut rng = SeededRng::new(0x50f7_1e9f ^ (rows as u64).rotate_left(17) ^ cols as u64);
    let mut iterations = 0;
    let mut converged = true;
    let mut schedule_residuals = Vec::with_capacity(schedule.len());

    for &lambda in schedule {
        converged = false;
        for _ in 0..max_iter {
            iterations += 1;
            let x_new = svt_step(&x, entries, &resid, lambda, rows, cols, &mut rng)?;
            // Relative Frobenius change in factored form.
            let nn = x_new.norm_sq();
            let no = x.norm_sq();
            let cross = x_new.inner_product(&x);
            let diff = (nn + no - 2.0 * cross).max(0.0).sqrt();
            let denom = no.sqrt().max(f64::MIN_POSITIVE);
            x = x_new;
            for ((r, &(i, j)), &v) in resid.iter_mut().zip(entries.iter()).zip(vals.iter()) {
                *r = v - x.entry(i, j);
            }
            if diff / denom <= tol {
                converged = true;
                break;
            }
        }
        schedule_residuals.push(resid.iter().map(|&r| r * r).sum::<f64>().sqrt());
    }

    let observed_residual = resid.iter().map(|&r| r * r).sum::<f64>().sqrt();
    Ok(CompletionResult {
        xhat: x.to_dense(),
        iterations,
        lambda_final: *schedule.last().expect("non-empty"),
        observed_residual,
        converged,
        schedule_residuals,
    })
}

/// One SVT step on Y = X + sparse(resid): all singular triplets with
/// sigma > lambda, soft-thresholded.
fn svt_step(
    x: &Factored,
    entries: &[(usize, usize)],
    resid: &[f64],
    lambda: f64,
    rows: usize,
    cols: usize,
    rng: &mut SeededRng,
) -> Result<Factored> {
    let dim_min = rows.min(cols);
    let mut block = (x.rank + 6).clamp(10, dim_min.min(MAX_RANK));

    loop {
        // Warm start: previous right factor padded with random columns.
        let mut q0 = Matrix::zeros(cols, block);
        for j in 0..cols {
            for r in 0..x.rank.min(block) {
                q0.set(j, r, x.v.get(j, r));
            }
        }
        for j in 0..cols {
            for r in x.rank.min(block)..block {
                q0.set(j, r, rng.normal());
            }
        }
        let (mut q, _) = householder_qr(&q0)?;
        let mut prev_ritz: Vec<f64> = Vec::new();
        let mut extraction = None;
        let iter_cap = if x.rank > 0 { SUBSPACE_WARM_ITER } else { SUBSPACE_MAX_ITER };

        for it in 0..iter_cap {
            let z = apply_y(x, entries, resid, &q, rows);
            let (qu, rz) = householder_qr(&z)?;
            let ritz = svd(&rz)?.singular_values;
            // Only the values that can survive thresholding need to settle;
            // the noise floor converges arbitrarily slowly and is discarded.
            let done = it + 1 == iter_cap
                || (!prev_ritz.is_empty() && {
                    let scale = ritz[0].max(1e-300);
                    ritz.iter()
                        .zip(prev_ritz.iter())
                        .take_while(|&(&a, _)| a > 0.5 * lambda)
                        .all(|(&a, &b)| (a - b).abs() <= SUBSPACE_RITZ_TOL * scale)
                });
            prev_ritz = ritz;
            if done {
                extraction = Some((qu, rz));
                break;
            }
            let w = apply_yt(x, entries, resid, &qu, cols);
            let (q_new, _) = householder_qr(&w)?;
            q = q_new;
        }

        // Rayleigh-Ritz extraction on the converged subspace.
        let (qu, rz) = extraction.expect("loop always breaks with an extraction");
        let small = svd(&rz)?;
        let sigmas = &small.singular_values;
        let kept = sigmas.iter().filter(|&&s| s > lambda).count();
        let exhausted = block >= dim_min.min(MAX_RANK);
        if kept == block && !exhausted {
            block = (block * 2).min(dim_min.min(MAX_RANK));
            continue;
        }

        let rank = kept;
        if rank == 0 {
            return Ok(Factored::zero(rows, cols));
        }
        let keep_idx: Vec<usize> = (0..rank).collect();
        let u_small = small.u.select_columns(&keep_idx);
        let v_small = small.v.select_columns(&keep_idx);
        let u = qu.matmul(&u_small)?;
        let v = q.matmul(&v_small)?;
        let s: Vec<f64> = sigmas[..rank].iter().map(|&x| x - lambda).collect();
        return Ok(Factored { u, s, v, rank });
    }
}

/// (X + S) q for a block q, where S holds `resid` at the mask entries.
fn apply_y(x: &Factored, entries: &[(usize, usize)], resid: &[f64], q: &Matrix, rows: usize) -> Matrix {
    let block = q.cols();
    let mut out = Matrix::zeros(rows, block);
    if x.rank > 0 {
        // U (S (V^T q))
        let vt_q = tr_matmul(&x.v, q, x.rank, block);
        for i in 0..rows {
            let urow = x.u.row(i);
            let orow = out.row_mut(i);
            for r in 0..x.rank {
                let us = urow[r] * x.s[r];
                if us == 0.0 {
                    continue;
                }
                for b in 0..block {
                    orow[b] += us * vt_q[r * block + b];
                }
            }
        }
    }
    for (&(i, j), &val) in entries.iter().zip(resid.iter()) {
        if val == 0.0 {
            continue;
        }
        let qrow = q.row(j);
        let orow = out.row_mut(i);
        for (o, &qv) in orow.iter_mut().zip(qrow.iter()) {
            *o += val * qv;
        }
    }
    out
}

/// (X + S)^T qu.
fn apply_yt(x: &Factored, entries: &[(usize, usize)], resid: &[f64], qu: &Matrix, cols: usize) -> Matrix {
    let block = qu.cols();
    let mut out = Matrix::zeros(cols, block);
    if x.rank > 0 {
        let ut_qu = tr_matmul(&x.u, qu, x.rank, block);
        for j in 0..cols {
            let vrow = x.v.row(j);
            let orow = out.row_mut(j);
            for r in 0..x.rank {
                let vs = vrow[r] * x.s[r];
                if vs == 0.0 {
                    continue;
                }
                for b in 0..block {
                    orow[b] += vs * ut_qu[r * block + b];
                }
            }
        }
    }
    for (&(i, j), &val) in entries.iter().zip(resid.iter()) {
        if val == 0.0 {
            continue;
        }
        let qrow = qu.row(i);
        let orow = out.row_mut(j);
        for (o, &qv) in orow.iter_mut().zip(qrow.iter()) {
            *o += val * qv;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::gaussian_matrix;

    fn full_mask(rows: usize, cols: usize) -> ObservationMask {
        let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect();
        ObservationMask::new((rows, cols), entries).unwrap()
    }

    #[test]
    fn mask_validation() {
        assert!(matches!(
            ObservationMask::new((2, 2), vec![(0, 0), (2, 1)]),
            Err(Error::MaskOutOfRange(2, 1, 2, 2))
        ));
        assert!(matches!(
            ObservationMask::new((2, 2), vec![(0, 0), (0, 0)]),
            Err(Error::DuplicateMaskEntry(0, 0))
        ));
        let m = ObservationMask::new((2, 2), vec![(1, 1), (0, 0)]).unwrap();
        assert_eq!(m.entries(), &[(0, 0), (1, 1)]);
        assert!((m.p() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sample_mask_full_and_deterministic() {
        let mut rng = SeededRng::new(1);
        let m = sample_mask(3, 4, 1.0, &mut rng).unwrap();
        assert_eq!(m.len(), 12);
        let a = sample_mask(10, 10, 0.3, &mut SeededRng::new(5)).unwrap();
        let b = sample_mask(10, 10, 0.3, &mut SeededRng::new(5)).unwrap();
        assert_eq!(a.entries(), b.entries());
        assert!(sample_mask(10, 10, 0.0, &mut rng).is_err());
        assert!(sample_mask(2, 2, 0.1, &mut rng).is_err());
    }

    #[test]
    fn sample_mask_binomial_concentration() {
        // Mean count over 50 seeds within 3 sqrt(p N n (1-p)) of p N n.
        let (rows, cols, p) = (100usize, 100usize, 0.1f64);
        let mut total = 0usize;
        for seed in 0..50u64 {
            let m = sample_mask(rows, cols, p, &mut SeededRng::new(seed)).unwrap();
            total += m.len();
        }
        let mean = total as f64 / 50.0;
        let expect = p * (rows * cols) as f64;
        let band = 3.0 * (expect * (1.0 - p)).sqrt();
        assert!((mean - expect).abs() <= band, "mean {mean} vs {expect} +- {band}");
    }

    #[test]
    fn fully_observed_recovers_input() {
        let mut rng = SeededRng::new(9);
        let x = gaussian_matrix(8, 6, &mut rng).unwrap();
        let observed = PartialMatrix::observe(&x, full_mask(8, 6)).unwrap();
        let sigma1 = svd(&x).unwrap().singular_values[0];
        let schedule = geometric_schedule(sigma1 * 0.5, sigma1 * 1e-8, 12);
        let r = soft_impute(&observed, &schedule, 1e-9, 200).unwrap();
        let rel = r.xhat.sub(&x).unwrap().frobenius_norm() / x.frobenius_norm();
        assert!(rel <= 1e-6, "relative error {rel}");
        assert!(r.converged);
    }

    #[test]
    fn all_zero_observations_give_zero() {
        let mask = ObservationMask::new((3, 3), vec![(0, 0), (1, 2), (2, 1)]).unwrap();
        let observed = PartialMatrix::new(mask, vec![0.0, 0.0, 0.0]).unwrap();
        let r = soft_impute(&observed, &[1.0, 0.5], 1e-8, 50).unwrap();
        assert!(r.xhat.data().iter().all(|&v| v == 0.0));
        assert_eq!(r.observed_residual, 0.0);
    }

    #[test]
    fn two_by_two_matches_nuclear_norm_oracle() {
        // Observe [[1,2],[2,?]]. Oracle: grid search over the missing entry
        // shows the nuclear norm sqrt(x^2-2x+17) (x<4) resp. 1+x (x>=4) is
        // minimized at x = 1 with value 4. Soft-impute with lambda -> 0 must
        // land on the same minimizer.
        let mut oracle_best = (f64::INFINITY, f64::NAN);
        let mut xg = -10.0;
        while xg <= 10.0 {
            let m = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, xg]]).unwrap();
            let nn: f64 = svd(&m).unwrap().singular_values.iter().sum();
            if nn < oracle_best.0 {
                oracle_best = (nn, xg);
            }
            xg += 0.001;
        }
        assert!((oracle_best.1 - 1.0).abs() < 0.01, "oracle argmin {}", oracle_best.1);

        let mask = ObservationMask::new((2, 2), vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        let observed = PartialMatrix::new(mask, vec![1.0, 2.0, 2.0]).unwrap();
        let schedule = geometric_schedule(2.0, 1e-6, 14);
        let r = soft_impute(&observed, &schedule, 1e-10, 500).unwrap();
        assert!(
            (r.xhat.get(1, 1) - oracle_best.1).abs() <= 0.05,
            "completed entry {} vs oracle {}",
            r.xhat.get(1, 1),
            oracle_best.1
        );
        assert!(r.observed_residual < 1e-2);
    }

    #[test]
    fn rank_one_exact_recovery() {
        // Random rank-1 5x5 with 80% observed: median relative error over
        // 20 trials at most 1e-3.
        let mut errs = Vec::new();
        for seed in 0..20u64 {
            let mut rng = SeededRng::new(400 + seed);
            let u = gaussian_matrix(5, 1, &mut rng).unwrap();
            let v = gaussian_matrix(5, 1, &mut rng).unwrap();
            let x = u.matmul(&v.transpose()).unwrap();
            let mask = sample_mask(5, 5, 0.8, &mut rng).unwrap();
            let observed = PartialMatrix::observe(&x, mask).unwrap();
            let schedule = default_lambda_schedule(&observed);
            let r = soft_impute(&observed, &schedule, 1e-9, 500).unwrap();
            errs.push(r.xhat.sub(&x).unwrap().frobenius_norm() / x.frobenius_norm());
        }
        errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = errs[errs.len() / 2];
        assert!(median <= 1e-3, "median relative error {median}");
    }

    #[test]
    fn residual_non_increasing_across_schedule() {
        let mut rng = SeededRng::new(21);
        let u = gaussian_matrix(10, 2, &mut rng).unwrap();
        let v = gaussian_matrix(8, 2, &mut rng).unwrap();
        let x = u.matmul(&v.transpose()).unwrap();
        let mask = sample_mask(10, 8, 0.7, &mut rng).unwrap();
        let observed = PartialMatrix::observe(&x, mask).unwrap();
        let schedule = default_lambda_schedule(&observed);
        let r = soft_impute(&observed, &schedule, 1e-9, 300).unwrap();
        for w in r.schedule_residuals.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-6) + 1e-12, "{} -> {}", w[0], w[1]);
        }
        // observed_residual recomputable from outputs.
        let recomputed = observed_residual_dense(&r.xhat, &observed);
        assert!((recomputed - r.observed_residual).abs() <= 1e-10);
    }

    #[test]
    fn svt_never_increases_rank() {
        let mut rng = SeededRng::new(31);
        let x = gaussian_matrix(9, 7, &mut rng).unwrap();
        let mask = sample_mask(9, 7, 0.6, &mut rng).unwrap();
        let observed = PartialMatrix::observe(&x, mask).unwrap();
        let schedule = default_lambda_schedule(&observed);
        let r = soft_impute(&observed, &schedule, 1e-8, 200).unwrap();
        // Final unthresholded iterate: Xhat with observed entries replaced.
        let mut y = r.xhat.clone();
        for (&(i, j), &v) in observed.mask.entries().iter().zip(&observed.values) {
            y.set(i, j, v);
        }
        let rank_y = svd(&y).unwrap().rank(None);
        let rank_x = svd(&r.xhat).unwrap().rank(None);
        assert!(rank_x <= rank_y);
    }

    #[test]
    fn factored_path_agrees_with_dense() {
        // Same instance through both code paths (the factored one is forced
        // by calling the internal function): recoveries must agree closely.
        let mut rng = SeededRng::new(55);
        let u = gaussian_matrix(40, 3, &mut rng).unwrap();
        let v = gaussian_matrix(30, 3, &mut rng).unwrap();
        let x = u.matmul(&v.transpose()).unwrap();
        let mask = sample_mask(40, 30, 0.5, &mut rng).unwrap();
        let observed = PartialMatrix::observe(&x, mask).unwrap();
        let schedule = default_lambda_schedule(&observed);
        let dense = soft_impute_dense(&observed, &schedule, 1e-8, 300).unwrap();
        let fact = soft_impute_factored(&observed, &schedule, 1e-8, 300).unwrap();
        let denom = x.frobenius_norm();
        let d_err = dense.xhat.sub(&x).unwrap().frobenius_norm() / denom;
        let f_err = fact.xhat.sub(&x).unwrap().frobenius_norm() / denom;
        assert!(d_err < 1e-2, "dense error {d_err}");
        assert!(f_err < 1e-2, "factored error {f_err}");
        let gap = dense.xhat.sub(&fact.xhat).unwrap().frobenius_norm() / denom;
        assert!(gap < 1e-3, "paths disagree by {gap}");
    }

    #[test]
    fn error_bound_examples() {
        // Direct evaluations of the bound formula.
        assert_eq!(completion_error_bound(1.0, 4, 4, 0.0).unwrap(), 0.0);
        let b = completion_error_bound(1.0, 4, 4, 0.1).unwrap();
        assert!((b - (4.0 * 12.0f64.sqrt() * 0.1 + 0.2)).abs() < 1e-12);
        assert!((b - 1.5856406).abs() < 1e-6);
        let b2 = completion_error_bound(0.1, 1000, 1000, 0.01).unwrap();
        assert!((b2 - (4.0 * 21000.0f64.sqrt() * 0.01 + 0.02)).abs() < 1e-12);
        assert!(completion_error_bound(0.0, 4, 4, 0.1).is_err());
        assert!(completion_error_bound(0.5, 4, 4, -0.1).is_err());
    }

    #[test]
    fn non_convergence_reported_not_thrown() {
        let mut rng = SeededRng::new(71);
        let x = gaussian_matrix(10, 10, &mut rng).unwrap();
        let mask = sample_mask(10, 10, 0.5, &mut rng).unwrap();
        let observed = PartialMatrix::observe(&x, mask).unwrap();
        let r = soft_impute(&observed, &[1e-6], 1e-14, 2).unwrap();
        assert!(!r.converged);
    }
}

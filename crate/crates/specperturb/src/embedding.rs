//! Spectral coordinates and k-means clustering of their rows.

use crate::affinity::{gaussian_kernel, normalize_affinity, AffinityPack, DataMatrix};
use crate::error::{Error, Result};
use crate::numkernel::{dist_sq, norm2, sym_eig, Matrix, SeededRng};

const KMEANS_MAX_ITER: usize = 300;
const KMEANS_MOVE_TOL: f64 = 1e-9;
pub const DEFAULT_RESTARTS: usize = 20;
const MAX_MATCH_CLASSES: usize = 10;

/// Top-k spectral coordinates of an affinity matrix.
///
/// With `drop_first` set the trivial leading eigenvector is skipped and
/// columns hold eigenvectors 2..k+1, matching how the embeddings are
/// usually displayed; bound checks use the plain top-k block.
#[derive(Debug, Clone)]
pub struct SpectralEmbedding {
    pub k: usize,
    pub eigenvalues: Vec<f64>,
    pub vk: Matrix,
    /// Eigengap below the selected block, recomputed from the full spectrum.
    pub alpha: f64,
    pub drop_first: bool,
}

impl SpectralEmbedding {
    /// Rows scaled to unit Euclidean norm (zero rows left untouched).
    pub fn normalized_rows(&self) -> Matrix {
        let mut m = self.vk.clone();
        for i in 0..m.rows() {
            let row = m.row_mut(i);
            let nrm = norm2(row);
            if nrm > 0.0 {
                row.iter_mut().for_each(|v| *v /= nrm);
            }
        }
        m
    }
}

/// Eigenvectors of `pack.a` for the k largest eigenvalues (or eigenvalues
/// 2..k+1 when `drop_first` is set).
///
/// When the leading eigenvalue 1 is numerically degenerate (disconnected
/// graph), the returned basis of that eigenspace is rotated so that its
/// first vector is the Perron direction D^{1/2} 1. Any basis of the
/// eigenspace is equally valid; this choice makes the remaining vectors
/// the cluster-contrast directions and keeps the output deterministic.
pub fn spectral_embed(pack: &AffinityPack, k: usize, drop_first: bool) -> Result<SpectralEmbedding> {
    let n = pack.a.rows();
    let start = usize::from(drop_first);
    if k == 0 || start + k + 1 > n {
        return Err(Error::InvalidParam(format!(
            "k = {k} with drop_first = {drop_first} out of range for {n} points"
        )));
    }
    let mut eig = sym_eig(&pack.a)?;
    canonicalize_unit_eigenspace(&mut eig.eigenvectors, &eig.eigenvalues, &pack.degrees);

    let indices: Vec<usize> = (start..start + k).collect();
    let vk = eig.eigenvectors.select_columns(&indices);
    let eigenvalues: Vec<f64> = indices.iter().map(|&i| eig.eigenvalues[i]).collect();
    let alpha = eig.eigenvalues[start + k - 1] - eig.eigenvalues[start + k];
    Ok(SpectralEmbedding { k, eigenvalues, vk, alpha, drop_first })
}

/// If the top eigenvalue 1 has numerical multiplicity >= 2, rotate that
/// group's basis so column 0 is D^{1/2} 1 (normalized).
fn canonicalize_unit_eigenspace(vectors: &mut Matrix, eigenvalues: &[f64], degrees: &[f64]) {
    let n = eigenvalues.len();
    let tol = 1e-8;
    if n < 2 || (eigenvalues[0] - 1.0).abs() > tol {
        return;
    }
    let g = eigenvalues.iter().take_while(|&&l| eigenvalues[0] - l <= tol).count();
    if g < 2 {
        return;
    }
    let mut w: Vec<f64> = degrees.iter().map(|&d| d.sqrt()).collect();
    let wn = norm2(&w);
    w.iter_mut().for_each(|v| *v /= wn);
    // Coefficients of w in the group basis.
    let mut c = vec![0.0; g];
    for (j, cj) in c.iter_mut().enumerate() {
        *cj = (0..vectors.rows()).map(|i| vectors.get(i, j) * w[i]).sum();
    }
    let cn = norm2(&c);
    if cn < 0.999 {
        return; // w does not lie in the group eigenspace; leave the basis alone
    }
    c.iter_mut().for_each(|v| *v /= cn);
    // Householder reflection with first column c: maps the basis so that
    // the rotated first vector equals the projection of w.
    let mut u = c.clone();
    u[0] -= 1.0;
    let usq: f64 = u.iter().map(|&v| v * v).sum();
    let rows = vectors.rows();
    let mut rotated = vec![0.0; rows * g];
    for i in 0..rows {
        let vrow: Vec<f64> = (0..g).map(|j| vectors.get(i, j)).collect();
        for jc in 0..g {
            // column jc of the reflection H = I - 2 u u^T / (u^T u)
            let mut acc = 0.0;
            for jr in 0..g {
                let mut h = if jr == jc { 1.0 } else { 0.0 };
                if usq > 0.0 {
                    h -= 2.0 * u[jr] * u[jc] / usq;
                }
                acc += vrow[jr] * h;
            }
            rotated[i * g + jc] = acc;
        }
    }
    for i in 0..rows {
        for j in 0..g {
            vectors.set(i, j, rotated[i * g + j]);
        }
    }
    // Re-apply the sign convention to the rotated columns.
    for j in 0..g {
        let mut best = 0.0f64;
        let mut sign = 1.0f64;
        for i in 0..rows {
            let x = vectors.get(i, j);
            if x.abs() > best {
                best = x.abs();
                sign = if x < 0.0 { -1.0 } else { 1.0 };
            }
        }
        if sign < 0.0 {
            for i in 0..rows {
                let x = vectors.get(i, j);
                vectors.set(i, j, -x);
            }
        }
    }
}

/// k-means cluster assignment over the rows of a matrix.
#[derive(Debug, Clone)]
pub struct ClusterAssignment {
    pub labels: Vec<usize>,
    pub centroids: Matrix,
    pub wcss: f64,
    pub restarts_used: usize,
}

/// Lloyd iterations from k-means++ seeding, best of `restarts` by
/// within-cluster sum of squares (ties keep the earliest restart).
/// An empty cluster is re-seeded at the point farthest from its centroid.
pub fn kmeans(points: &Matrix, k: usize, rng: &mut SeededRng, restarts: usize) -> Result<ClusterAssignment> {
    let n = points.rows();
    if k == 0 || k > n {
        return Err(Error::InvalidParam(format!("k = {k} out of range for {n} points")));
    }
    if restarts == 0 {
        return Err(Error::InvalidParam("restarts must be at least 1".to_string()));
    }
    let mut best: Option<ClusterAssignment> = None;
    for _ in 0..restarts {
        let run = lloyd_run(points, k, rng)?;
        let better = match &best {
            None => true,
            Some(b) => run.wcss < b.wcss,
        };
        if better {
            best = Some(run);
        }
    }
    let mut out = best.expect("at least one restart");
    out.restarts_used = restarts;
    Ok(out)
}

fn lloyd_run(points: &Matrix, k: usize, rng: &mut SeededRng) -> Result<ClusterAssignment> {
    let n = points.rows();
    let dim = points.cols();
    let mut centroids = seed_plus_plus(points, k, rng);
    let mut labels = vec![0usize; n];
    let mut prev_wcss = f64::INFINITY;

    for _ in 0..KMEANS_MAX_ITER {
        let mut wcss = assign(points, &centroids, &mut labels);

        // Re-seed empty clusters at the farthest point from its centroid.
        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let mut far_i = 0;
            let mut far_d = -1.0;
            for i in 0..n {
                let d = dist_sq(points.row(i), centroids.row(labels[i]));
                if d > far_d {
                    far_d = d;
                    far_i = i;
                }
            }
            let row = points.row(far_i).to_vec();
            centroids.row_mut(c).copy_from_slice(&row);
            counts[labels[far_i]] = counts[labels[far_i]].saturating_sub(1);
            labels[far_i] = c;
            counts[c] = 1;
            wcss = recompute_wcss(points, &centroids, &labels);
        }

        // Lloyd never increases the objective between assignment passes.
        assert!(
            wcss <= prev_wcss * (1.0 + 1e-9) + 1e-12,
            "k-means objective increased: {prev_wcss} -> {wcss}"
        );
        prev_wcss = wcss;

        // Update step: move centroids to cluster means.
        let mut sums = vec![0.0f64; k * dim];
        let mut sizes = vec![0usize; k];
        for i in 0..n {
            let l = labels[i];
            sizes[l] += 1;
            let row = points.row(i);
            for (s, &v) in sums[l * dim..(l + 1) * dim].iter_mut().zip(row.iter()) {
                *s += v;
            }
        }
        let mut movement = 0.0f64;
        for c in 0..k {
            if sizes[c] == 0 {
                continue;
            }
            let inv = 1.0 / sizes[c] as f64;
            let mut delta = 0.0;
            let crow = centroids.row_mut(c);
            for (j, cv) in crow.iter_mut().enumerate() {
                let nv = sums[c * dim + j] * inv;
                let d = nv - *cv;
                delta += d * d;
                *cv = nv;
            }
            movement = movement.max(delta.sqrt());
        }
        if movement <= KMEANS_MOVE_TOL {
            break;
        }
    }

    let wcss = assign(points, &centroids, &mut labels);
    Ok(ClusterAssignment { labels, centroids, wcss, restarts_used: 1 })
}

fn assign(points: &Matrix, centroids: &Matrix, labels: &mut [usize]) -> f64 {
    let k = centroids.rows();
    let mut wcss = 0.0;
    for i in 0..points.rows() {
        let row = points.row(i);
        let mut best_c = 0;
        let mut best_d = f64::INFINITY;
        for c in 0..k {
            let d = dist_sq(row, centroids.row(c));
            if d < best_d {
                best_d = d;
                best_c = c;
            }
        }
        labels[i] = best_c;
        wcss += best_d;
    }
    wcss
}

fn recompute_wcss(points: &Matrix, centroids: &Matrix, labels: &[usize]) -> f64 {
    (0..points.rows())
        .map(|i| dist_sq(points.row(i), centroids.row(labels[i])))
        .sum()
}

fn seed_plus_plus(points: &Matrix, k: usize, rng: &mut SeededRng) -> Matrix {
    let n = points.rows();
    let dim = points.cols();
    let mut centroids = Matrix::zeros(k, dim);
    let first = rng.gen_range(n);
    centroids.row_mut(0).copy_from_slice(points.row(first));
    let mut min_d: Vec<f64> = (0..n)
        .map(|i| dist_sq(points.row(i), centroids.row(0)))
        .collect();
    for c in 1..k {
        let total: f64 = min_d.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.next_f64() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &d) in min_d.iter().enumerate() {
                acc += d;
                if acc > target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.gen_range(n)
        };
        centroids.row_mut(c).copy_from_slice(points.row(pick));
        for i in 0..n {
            let d = dist_sq(points.row(i), centroids.row(c));
            if d < min_d[i] {
                min_d[i] = d;
            }
        }
    }
    centroids
}

/// Fraction of disagreeing labels, minimized over all relabelings of
/// `labels` (cluster identities are arbitrary). Exhaustive over the label
/// alphabet, which is capped at 10 distinct values per side.
pub fn misclassification_rate(labels: &[usize], reference: &[usize]) -> Result<f64> {
    if labels.len() != reference.len() || labels.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "label vectors of lengths {} and {}",
            labels.len(),
            reference.len()
        )));
    }
    let mut vals_a: Vec<usize> = labels.to_vec();
    vals_a.sort_unstable();
    vals_a.dedup();
    let mut vals_b: Vec<usize> = reference.to_vec();
    vals_b.sort_unstable();
    vals_b.dedup();
    if vals_a.len() > MAX_MATCH_CLASSES {
        return Err(Error::TooManyClasses(vals_a.len(), MAX_MATCH_CLASSES));
    }
    if vals_b.len() > MAX_MATCH_CLASSES {
        return Err(Error::TooManyClasses(vals_b.len(), MAX_MATCH_CLASSES));
    }
    let l = vals_a.len().max(vals_b.len());
    let index_a: std::collections::HashMap<usize, usize> =
        vals_a.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let index_b: std::collections::HashMap<usize, usize> =
        vals_b.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut conf = vec![0usize; l * l];
    for (&a, &b) in labels.iter().zip(reference.iter()) {
        conf[index_a[&a] * l + index_b[&b]] += 1;
    }
    // Heap's algorithm over assignments of a-classes to b-classes.
    let mut perm: Vec<usize> = (0..l).collect();
    let mut stack = vec![0usize; l];
    let score = |p: &[usize]| -> usize { (0..l).map(|a| conf[a * l + p[a]]).sum() };
    let mut best = score(&perm);
    let mut i = 0;
    while i < l {
        if stack[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(stack[i], i);
            }
            best = best.max(score(&perm));
            stack[i] += 1;
            i = 0;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    Ok(1.0 - best as f64 / labels.len() as f64)
}

/// Options for the end-to-end clustering pipeline.
#[derive(Debug, Clone)]
pub struct ClusterConfig {
    pub k: usize,
    pub sigma: Option<f64>,
    pub drop_first: bool,
    pub normalize_rows: bool,
    pub restarts: usize,
}

impl ClusterConfig {
    pub fn new(k: usize) -> Self {
        Self { k, sigma: None, drop_first: true, normalize_rows: false, restarts: DEFAULT_RESTARTS }
    }

    pub fn with_sigma(mut self, sigma: Option<f64>) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_drop_first(mut self, drop_first: bool) -> Self {
        self.drop_first = drop_first;
        self
    }

    pub fn with_normalize_rows(mut self, normalize_rows: bool) -> Self {
        self.normalize_rows = normalize_rows;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub sigma: f64,
    pub embedding: SpectralEmbedding,
    pub assignment: ClusterAssignment,
    pub rho: Option<f64>,
}

/// gaussian_kernel -> normalize_affinity -> spectral_embed -> kmeans,
/// with the misclassification rate attached when ground truth is present.
pub fn cluster_pipeline(
    data: &DataMatrix,
    config: &ClusterConfig,
    rng: &mut SeededRng,
) -> Result<PipelineResult> {
    let sigma = data.resolve_sigma(config.sigma)?;
    let w = gaussian_kernel(data, sigma)?;
    let pack = normalize_affinity(&w)?;
    let embedding = spectral_embed(&pack, config.k, config.drop_first)?;
    let points = if config.normalize_rows {
        embedding.normalized_rows()
    } else {
        embedding.vk.clone()
    };
    let assignment = kmeans(&points, config.k, rng, config.restarts)?;
    let rho = match &data.labels {
        Some(reference) => Some(misclassification_rate(&assignment.labels, reference)?),
        None => None,
    };
    Ok(PipelineResult { sigma, embedding, assignment, rho })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affinity::normalize_affinity;
    use crate::numkernel::gaussian_matrix;

    #[test]
    fn embed_identity_affinity() {
        // A = I3 has a fully degenerate spectrum; only the invariants are
        // meaningful: three unit eigenvalues and orthonormal columns.
        let pack = normalize_affinity(&Matrix::identity(4)).unwrap();
        let e = spectral_embed(&pack, 3, false).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
        let vtv = e.vk.transpose().matmul(&e.vk).unwrap();
        assert!(vtv.sub(&Matrix::identity(3)).unwrap().frobenius_norm() <= 1e-10);
    }

    #[test]
    fn embed_two_point_block() {
        let w = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let pack = normalize_affinity(&w).unwrap();
        let e = spectral_embed(&pack, 1, false).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-12);
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.vk.get(0, 0) - inv).abs() < 1e-12);
        assert!((e.vk.get(1, 0) - inv).abs() < 1e-12);
    }

    #[test]
    fn embed_rejects_out_of_range_k() {
        let pack = normalize_affinity(&Matrix::identity(4)).unwrap();
        assert!(spectral_embed(&pack, 0, false).is_err());
        assert!(spectral_embed(&pack, 4, false).is_err());
        assert!(spectral_embed(&pack, 3, true).is_err());
    }

    #[test]
    fn block_diagonal_unit_eigenvalue_count() {
        // Three perfect blocks: exactly three eigenvalues equal to one.
        let mut w = Matrix::zeros(9, 9);
        for b in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    w.set(b * 3 + i, b * 3 + j, 1.0);
                }
            }
        }
        let pack = normalize_affinity(&w).unwrap();
        let eig = sym_eig(&pack.a).unwrap();
        let units = eig.eigenvalues.iter().filter(|&&l| (l - 1.0).abs() <= 1e-10).count();
        assert_eq!(units, 3);
        assert!(eig.eigenvalues[3] < 1.0 - 1e-6);
    }

    #[test]
    fn block_rows_identical_within_block() {
        let mut w = Matrix::zeros(5, 5);
        for (lo, hi) in [(0usize, 3usize), (3, 5)] {
            for i in lo..hi {
                for j in lo..hi {
                    w.set(i, j, 1.0);
                }
            }
        }
        let pack = normalize_affinity(&w).unwrap();
        let e = spectral_embed(&pack, 2, false).unwrap();
        for (lo, hi) in [(0usize, 3usize), (3, 5)] {
            for i in lo + 1..hi {
                let d = dist_sq(e.vk.row(lo), e.vk.row(i)).sqrt();
                assert!(d <= 1e-8, "rows {lo} and {i} differ by {d}");
            }
        }
    }

    #[test]
    fn kmeans_separated_line() {
        let pts = Matrix::from_rows(vec![vec![0.0], vec![0.1], vec![10.0], vec![10.1]]).unwrap();
        let mut rng = SeededRng::new(1);
        let a = kmeans(&pts, 2, &mut rng, 5).unwrap();
        assert_eq!(a.labels[0], a.labels[1]);
        assert_eq!(a.labels[2], a.labels[3]);
        assert_ne!(a.labels[0], a.labels[2]);
    }

    #[test]
    fn kmeans_single_cluster_is_mean() {
        let pts = Matrix::from_rows(vec![vec![1.0], vec![2.0], vec![3.0], vec![6.0]]).unwrap();
        let mut rng = SeededRng::new(2);
        let a = kmeans(&pts, 1, &mut rng, 3).unwrap();
        assert!((a.centroids.get(0, 0) - 3.0).abs() < 1e-12);
        let expected: f64 = [1.0f64, 2.0, 3.0, 6.0].iter().map(|v| (v - 3.0) * (v - 3.0)).sum();
        assert!((a.wcss - expected).abs() < 1e-10);
    }

    #[test]
    fn kmeans_k_equals_n() {
        let pts = Matrix::from_rows(vec![vec![0.0], vec![5.0], vec![9.0]]).unwrap();
        let mut rng = SeededRng::new(3);
        let a = kmeans(&pts, 3, &mut rng, 10).unwrap();
        assert!(a.wcss <= 1e-12);
        let mut sorted = a.labels.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
    }

    #[test]
    fn kmeans_rejects_bad_k() {
        let pts = Matrix::zeros(3, 1);
        let mut rng = SeededRng::new(1);
        assert!(kmeans(&pts, 4, &mut rng, 1).is_err());
        assert!(kmeans(&pts, 0, &mut rng, 1).is_err());
        assert!(kmeans(&pts, 2, &mut rng, 0).is_err());
    }

    #[test]
    fn kmeans_deterministic_per_seed() {
        let m = gaussian_matrix(40, 3, &mut SeededRng::new(8)).unwrap();
        let a = kmeans(&m, 4, &mut SeededRng::new(9), 7).unwrap();
        let b = kmeans(&m, 4, &mut SeededRng::new(9), 7).unwrap();
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.wcss, b.wcss);
        assert_eq!(a.restarts_used, 7);
    }

    #[test]
    fn rho_identical_and_swapped() {
        let l = vec![0, 0, 1, 1];
        assert_eq!(misclassification_rate(&l, &l).unwrap(), 0.0);
        let swapped = vec![1, 1, 0, 0];
        assert_eq!(misclassification_rate(&swapped, &l).unwrap(), 0.0);
    }

    #[test]
    fn rho_single_mismatch() {
        let a = vec![0, 0, 1, 1];
        let b = vec![0, 0, 1, 0];
        assert!((misclassification_rate(&a, &b).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rho_symmetric_under_relabeling() {
        let mut rng = SeededRng::new(12);
        for _ in 0..20 {
            let n = 30;
            let a: Vec<usize> = (0..n).map(|_| rng.gen_range(3)).collect();
            let b: Vec<usize> = (0..n).map(|_| rng.gen_range(3)).collect();
            let base = misclassification_rate(&a, &b).unwrap();
            // Relabel a by a fixed permutation.
            let perm = [2usize, 0, 1];
            let a2: Vec<usize> = a.iter().map(|&v| perm[v]).collect();
            let b2: Vec<usize> = b.iter().map(|&v| perm[v]).collect();
            assert!((misclassification_rate(&a2, &b).unwrap() - base).abs() < 1e-15);
            assert!((misclassification_rate(&a, &b2).unwrap() - base).abs() < 1e-15);
        }
    }

    #[test]
    fn rho_balanced_upper_bound() {
        // After permutation matching, rho <= (k-1)/k for balanced references.
        let mut rng = SeededRng::new(77);
        for k in 2..=4usize {
            for _ in 0..10 {
                let n = 12 * k;
                let reference: Vec<usize> = (0..n).map(|i| i % k).collect();
                let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(k)).collect();
                let rho = misclassification_rate(&labels, &reference).unwrap();
                assert!(rho <= (k as f64 - 1.0) / k as f64 + 1e-12);
            }
        }
    }

    #[test]
    fn rho_rejects_too_many_classes() {
        let a: Vec<usize> = (0..12).collect();
        let b: Vec<usize> = (0..12).collect();
        assert!(matches!(
            misclassification_rate(&a, &b),
            Err(Error::TooManyClasses(12, 10))
        ));
    }

    #[test]
    fn pipeline_on_separated_blobs() {
        // Two well-separated Gaussian blobs: rho = 0. Oracle: the blobs are
        // linearly separable in the second eigenvector because the maximum
        // intra-blob spread is far below the inter-blob distance.
        let mut rng = SeededRng::new(5);
        let n_half = 15;
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..2 * n_half {
            let cluster = usize::from(i >= n_half);
            let center = if cluster == 0 { 0.0 } else { 8.0 };
            rows.push(vec![center + 0.3 * rng.normal(), center + 0.3 * rng.normal()]);
            labels.push(cluster);
        }
        let data = DataMatrix::new(Matrix::from_rows(rows).unwrap(), Some(labels), None).unwrap();
        let cfg = ClusterConfig::new(2).with_drop_first(false);
        let r = cluster_pipeline(&data, &cfg, &mut SeededRng::new(6)).unwrap();
        assert_eq!(r.rho, Some(0.0));
    }

    #[test]
    fn pipeline_three_far_points() {
        let data = DataMatrix::new(
            Matrix::from_rows(vec![vec![0.0, 0.0], vec![100.0, 0.0], vec![0.0, 100.0]]).unwrap(),
            Some(vec![0, 1, 2]),
            Some(10.0),
        )
        .unwrap();
        // k = 3 embedding is out of range for N = 3 (alpha needs the k+1-th
        // eigenvalue), so embed at k = 2 and run k-means with k = 3.
        let sigma = data.resolve_sigma(None).unwrap();
        let pack = crate::affinity::perturbed_affinity(&data, sigma).unwrap();
        let e = spectral_embed(&pack, 2, false).unwrap();
        let a = kmeans(&e.vk, 3, &mut SeededRng::new(4), 10).unwrap();
        let rho = misclassification_rate(&a.labels, data.labels.as_ref().unwrap()).unwrap();
        assert_eq!(rho, 0.0);
    }

    #[test]
    fn pipeline_deterministic() {
        let mut rng = SeededRng::new(50);
        let x = gaussian_matrix(20, 3, &mut rng).unwrap();
        let data = DataMatrix::new(x, None, None).unwrap();
        let cfg = ClusterConfig::new(2);
        let a = cluster_pipeline(&data, &cfg, &mut SeededRng::new(1)).unwrap();
        let b = cluster_pipeline(&data, &cfg, &mut SeededRng::new(1)).unwrap();
        assert_eq!(a.assignment.labels, b.assignment.labels);
        assert_eq!(a.embedding.vk.data(), b.embedding.vk.data());
        assert_eq!(a.sigma, b.sigma);
    }
}

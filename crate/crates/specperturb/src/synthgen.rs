//! Deterministic generators for the synthetic instance families: noisy
//! block affinities, sparse point clouds measured compressively, and
//! low-rank image-like matrices for completion experiments.

use crate::affinity::DataMatrix;
use crate::error::{Error, Result};
use crate::numkernel::{random_orthogonal, Matrix, SeededRng};

/// Block-diagonal affinity of all-ones blocks plus symmetric uniform noise.
#[derive(Debug, Clone)]
pub struct BlockAffinitySpec {
    pub block_sizes: Vec<usize>,
    /// Noise amplitude: entries of the perturbation are uniform on [0, eps]
    /// (symmetrized as (U + U^T)/2, which stays within [0, eps]).
    pub eps: f64,
    pub seed: u64,
}

/// W = blockdiag(ones) + (U + U^T)/2 with U_ij ~ Uniform[0, eps], plus the
/// block index of every point. Normalize with the affinity module to get
/// the perturbed affinity matrix.
pub fn block_affinity(spec: &BlockAffinitySpec) -> Result<(Matrix, Vec<usize>)> {
    let n: usize = spec.block_sizes.iter().sum();
    if n < 2 || spec.block_sizes.iter().any(|&b| b == 0) {
        return Err(Error::InvalidParam(
            "block sizes must be positive and sum to at least 2".to_string(),
        ));
    }
    if spec.eps < 0.0 {
        return Err(Error::InvalidParam(format!("eps must be >= 0, got {}", spec.eps)));
    }
    let mut w = Matrix::zeros(n, n);
    let mut labels = vec![0usize; n];
    let mut offset = 0;
    for (b, &size) in spec.block_sizes.iter().enumerate() {
        for i in offset..offset + size {
            labels[i] = b;
            for j in offset..offset + size {
                w.set(i, j, 1.0);
            }
        }
        offset += size;
    }
    if spec.eps > 0.0 {
        let mut rng = SeededRng::new(spec.seed);
        let mut u = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                u.set(i, j, rng.uniform(spec.eps));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let e = 0.5 * (u.get(i, j) + u.get(j, i));
                let cur = w.get(i, j);
                w.set(i, j, cur + e);
            }
        }
    }
    Ok((w, labels))
}

/// Point cloud that is exactly s-sparse in an unknown orthogonal basis:
/// cluster centers are s-sparse coefficient vectors on disjoint supports,
/// points add Gaussian jitter on the same support, and everything is
/// rotated into the ambient space by a random orthogonal matrix.
#[derive(Debug, Clone)]
pub struct SparseCloudSpec {
    pub n_points: usize,
    pub dim: usize,
    pub sparsity: usize,
    pub clusters: usize,
    pub noise: f64,
    pub basis_seed: u64,
    pub point_seed: u64,
}

pub fn sparse_cloud(spec: &SparseCloudSpec) -> Result<DataMatrix> {
    let (n_points, dim, s, k) = (spec.n_points, spec.dim, spec.sparsity, spec.clusters);
    if n_points < 2 || k == 0 || k > n_points || s == 0 || s > dim {
        return Err(Error::InvalidParam(format!(
            "invalid sparse cloud: N={n_points}, n={dim}, s={s}, k={k}"
        )));
    }
    if k * s > dim {
        return Err(Error::InvalidParam(format!(
            "disjoint supports impossible: k*s = {} > n = {dim}",
            k * s
        )));
    }
    if spec.noise < 0.0 {
        return Err(Error::InvalidParam(format!("noise must be >= 0, got {}", spec.noise)));
    }
    let mut basis_rng = SeededRng::new(spec.basis_seed);
    let basis = random_orthogonal(dim, &mut basis_rng)?;

    let mut rng = SeededRng::new(spec.point_seed);
    // Disjoint supports from a Fisher-Yates shuffle of the coordinates.
    let mut perm: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        let j = rng.gen_range(i + 1);
        perm.swap(i, j);
    }
    let supports: Vec<&[usize]> = (0..k).map(|c| &perm[c * s..(c + 1) * s]).collect();
    // Centers: magnitudes in [1, 2] with random signs, bounded away from 0.
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    for support in &supports {
        let mut c = vec![0.0; dim];
        for &idx in support.iter() {
            let mag = 1.0 + rng.next_f64();
            let sign = if rng.next_f64() < 0.5 { -1.0 } else { 1.0 };
            c[idx] = sign * mag;
        }
        centers.push(c);
    }

    // Balanced contiguous cluster sizes.
    let base = n_points / k;
    let extra = n_points % k;
    let mut labels = Vec::with_capacity(n_points);
    for c in 0..k {
        let size = base + usize::from(c < extra);
        labels.extend(std::iter::repeat(c).take(size));
    }

    // x_i = B^T y_i, i.e. row i of X = y_i^T B; y_i is s-sparse.
    let mut x = Matrix::zeros(n_points, dim);
    for (i, &c) in labels.iter().enumerate() {
        let mut y = centers[c].clone();
        if spec.noise > 0.0 {
            for &idx in supports[c].iter() {
                y[idx] += spec.noise * rng.normal();
            }
        }
        let row = x.row_mut(i);
        for &idx in supports[c].iter() {
            let coeff = y[idx];
            if coeff == 0.0 {
                continue;
            }
            let brow = basis.row(idx);
            for (o, &b) in row.iter_mut().zip(brow.iter()) {
                *o += coeff * b;
            }
        }
    }
    DataMatrix::new(x, Some(labels), None)
}

/// Extra singular directions appended with geometrically decaying
/// magnitudes, emulating a sweep over the "approximate rank" of the data.
#[derive(Debug, Clone)]
pub struct RankInflation {
    pub target_rank: usize,
    /// Magnitude of the first extra direction relative to the cluster scale.
    pub scale: f64,
    pub decay: f64,
}

/// Rows are images living in an r-dimensional subspace: cluster centroids
/// plus in-subspace Gaussian jitter, mapped through r orthonormal
/// directions of the ambient space. rank(X) <= r exactly (or the inflated
/// target rank when inflation is requested).
#[derive(Debug, Clone)]
pub struct LowRankSpec {
    pub n_points: usize,
    pub dim: usize,
    pub rank: usize,
    pub clusters: usize,
    pub noise: f64,
    pub seed: u64,
    pub inflate: Option<RankInflation>,
}

pub fn lowrank_images(spec: &LowRankSpec) -> Result<DataMatrix> {
    let (n_points, dim, r, k) = (spec.n_points, spec.dim, spec.rank, spec.clusters);
    if n_points < 2 || r == 0 || r > dim.min(n_points) || k == 0 || k > r {
        return Err(Error::InvalidParam(format!(
            "invalid low-rank spec: N={n_points}, n={dim}, r={r}, k={k} (need k <= r <= min(N, n))"
        )));
    }
    if spec.noise < 0.0 {
        return Err(Error::InvalidParam(format!("noise must be >= 0, got {}", spec.noise)));
    }
    let total_rank = match &spec.inflate {
        Some(inf) => {
            if inf.target_rank < r || inf.target_rank > dim.min(n_points) {
                return Err(Error::InvalidParam(format!(
                    "inflated rank {} must lie in [r, min(N, n)]",
                    inf.target_rank
                )));
            }
            if !(inf.scale >= 0.0) || !(inf.decay > 0.0 && inf.decay <= 1.0) {
                return Err(Error::InvalidParam(
                    "inflation needs scale >= 0 and decay in (0, 1]".to_string(),
                ));
            }
            inf.target_rank
        }
        None => r,
    };

    let mut rng = SeededRng::new(spec.seed);
    // Orthonormal ambient directions for all (base + extra) components.
    let g = crate::numkernel::gaussian_matrix(dim, total_rank, &mut rng)?;
    let (v_dirs, _) = crate::numkernel::householder_qr(&g)?;

    let base = n_points / k;
    let extra_pts = n_points % k;
    let mut labels = Vec::with_capacity(n_points);
    for c in 0..k {
        let size = base + usize::from(c < extra_pts);
        labels.extend(std::iter::repeat(c).take(size));
    }

    // Coefficients: centroid e_c (scaled) + jitter, then decaying extras.
    let center_scale = 1.0;
    let mut coef = Matrix::zeros(n_points, total_rank);
    for (i, &c) in labels.iter().enumerate() {
        let row = coef.row_mut(i);
        row[c] = center_scale;
        if spec.noise > 0.0 {
            for item in row.iter_mut().take(r) {
                *item += spec.noise * rng.normal();
            }
        }
        if let Some(inf) = &spec.inflate {
            for (l, item) in row.iter_mut().enumerate().take(total_rank).skip(r) {
                let mag = center_scale * inf.scale * inf.decay.powi((l - r) as i32);
                *item += mag * rng.normal();
            }
        }
    }
    let x = coef.matmul(&v_dirs.transpose())?;
    DataMatrix::new(x, Some(labels), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affinity::normalize_affinity;
    use crate::numkernel::{dist_sq, random_orthogonal, svd, sym_eig};

    #[test]
    fn block_affinity_exact_when_noise_free() {
        let (w, labels) = block_affinity(&BlockAffinitySpec {
            block_sizes: vec![2, 1],
            eps: 0.0,
            seed: 1,
        })
        .unwrap();
        let expect = Matrix::from_rows(vec![
            vec![1.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(w.data(), expect.data());
        assert_eq!(labels, vec![0, 0, 1]);
        // Normalized form has eigenvalue 1 with multiplicity 2.
        let pack = normalize_affinity(&w).unwrap();
        let eig = sym_eig(&pack.a).unwrap();
        let units = eig.eigenvalues.iter().filter(|&&l| (l - 1.0).abs() <= 1e-12).count();
        assert_eq!(units, 2);
    }

    #[test]
    fn singleton_blocks_are_identity() {
        let (w, _) = block_affinity(&BlockAffinitySpec {
            block_sizes: vec![1, 1, 1],
            eps: 0.0,
            seed: 0,
        })
        .unwrap();
        assert_eq!(w.data(), Matrix::identity(3).data());
        // "Three eigenvalues of one" after normalization.
        let pack = normalize_affinity(&w).unwrap();
        let eig = sym_eig(&pack.a).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| (l - 1.0).abs() <= 1e-12));
    }

    #[test]
    fn noise_is_symmetric_and_bounded() {
        let (w, _) = block_affinity(&BlockAffinitySpec {
            block_sizes: vec![4, 4],
            eps: 0.25,
            seed: 7,
        })
        .unwrap();
        let (asym, _, _) = w.symmetry_error();
        assert!(asym == 0.0);
        for i in 0..8 {
            for j in 0..8 {
                let base = if (i < 4) == (j < 4) { 1.0 } else { 0.0 };
                let e = w.get(i, j) - base;
                assert!((0.0..=0.25).contains(&e), "noise {e} out of range");
            }
        }
    }

    #[test]
    fn unit_eigenvalue_count_matches_blocks() {
        for sizes in [vec![3usize, 5], vec![2, 2, 4], vec![6, 3, 2, 4]] {
            let k = sizes.len();
            let (w, _) = block_affinity(&BlockAffinitySpec {
                block_sizes: sizes,
                eps: 0.0,
                seed: 3,
            })
            .unwrap();
            let pack = normalize_affinity(&w).unwrap();
            let eig = sym_eig(&pack.a).unwrap();
            let units = eig.eigenvalues.iter().filter(|&&l| (l - 1.0).abs() <= 1e-10).count();
            assert_eq!(units, k);
        }
    }

    #[test]
    fn sparse_cloud_construction_invariants() {
        let spec = SparseCloudSpec {
            n_points: 20,
            dim: 16,
            sparsity: 3,
            clusters: 2,
            noise: 0.1,
            basis_seed: 5,
            point_seed: 6,
        };
        let data = sparse_cloud(&spec).unwrap();
        assert_eq!(data.n_points(), 20);
        assert_eq!(data.dim(), 16);
        let labels = data.labels.as_ref().unwrap();
        assert_eq!(labels.iter().filter(|&&l| l == 0).count(), 10);

        // Coefficients B x_i must be s-sparse (rotating back recovers y_i).
        let mut basis_rng = SeededRng::new(5);
        let basis = random_orthogonal(16, &mut basis_rng).unwrap();
        for i in 0..20 {
            let y = basis.matmul(&Matrix::from_fn(16, 1, |r, _| data.x.get(i, r)).unwrap()).unwrap();
            let big = (0..16).filter(|&r| y.get(r, 0).abs() > 1e-10).count();
            assert!(big <= 3, "row {i} has {big} large coefficients");
        }
    }

    #[test]
    fn sparse_cloud_zero_noise_duplicates_centers() {
        let spec = SparseCloudSpec {
            n_points: 8,
            dim: 10,
            sparsity: 2,
            clusters: 2,
            noise: 0.0,
            basis_seed: 1,
            point_seed: 2,
        };
        let data = sparse_cloud(&spec).unwrap();
        for i in 1..4 {
            assert!(dist_sq(data.x.row(0), data.x.row(i)) < 1e-28);
        }
        // Disjoint supports make inter-cluster centers orthogonal.
        let d0 = data.x.row(0);
        let d1 = data.x.row(4);
        let dot: f64 = d0.iter().zip(d1.iter()).map(|(&a, &b)| a * b).sum();
        assert!(dot.abs() < 1e-10);
    }

    #[test]
    fn sparse_cloud_rejects_impossible_supports() {
        let spec = SparseCloudSpec {
            n_points: 10,
            dim: 5,
            sparsity: 3,
            clusters: 2,
            noise: 0.1,
            basis_seed: 1,
            point_seed: 1,
        };
        assert!(sparse_cloud(&spec).is_err());
    }

    #[test]
    fn lowrank_exact_rank() {
        let spec = LowRankSpec {
            n_points: 30,
            dim: 12,
            rank: 4,
            clusters: 3,
            noise: 0.05,
            seed: 9,
            inflate: None,
        };
        let data = lowrank_images(&spec).unwrap();
        let dec = svd(&data.x).unwrap();
        assert_eq!(dec.rank(None), 4);
    }

    #[test]
    fn lowrank_no_noise_repeats_centroids() {
        let spec = LowRankSpec {
            n_points: 9,
            dim: 8,
            rank: 3,
            clusters: 3,
            noise: 0.0,
            seed: 2,
            inflate: None,
        };
        let data = lowrank_images(&spec).unwrap();
        let dec = svd(&data.x).unwrap();
        assert_eq!(dec.rank(None), 3);
        let labels = data.labels.as_ref().unwrap();
        for i in 1..9 {
            if labels[i] == labels[0] {
                assert!(dist_sq(data.x.row(0), data.x.row(i)) < 1e-28);
            }
        }
    }

    #[test]
    fn lowrank_inflation_raises_rank() {
        let spec = LowRankSpec {
            n_points: 40,
            dim: 20,
            rank: 3,
            clusters: 3,
            noise: 0.02,
            seed: 4,
            inflate: Some(RankInflation { target_rank: 10, scale: 0.5, decay: 0.9 }),
        };
        let data = lowrank_images(&spec).unwrap();
        let dec = svd(&data.x).unwrap();
        assert_eq!(dec.rank(None), 10);
    }

    #[test]
    fn generators_deterministic_per_seed() {
        let bs = BlockAffinitySpec { block_sizes: vec![5, 5], eps: 0.2, seed: 11 };
        assert_eq!(block_affinity(&bs).unwrap().0.data(), block_affinity(&bs).unwrap().0.data());
        let sc = SparseCloudSpec {
            n_points: 12,
            dim: 9,
            sparsity: 2,
            clusters: 2,
            noise: 0.3,
            basis_seed: 1,
            point_seed: 2,
        };
        assert_eq!(sparse_cloud(&sc).unwrap().x.data(), sparse_cloud(&sc).unwrap().x.data());
        let lr = LowRankSpec {
            n_points: 14,
            dim: 7,
            rank: 3,
            clusters: 2,
            noise: 0.1,
            seed: 3,
            inflate: None,
        };
        assert_eq!(lowrank_images(&lr).unwrap().x.data(), lowrank_images(&lr).unwrap().x.data());
    }
}

use specperturb::affinity::normalize_affinity;
use specperturb::embedding::{cluster_pipeline, spectral_embed, ClusterConfig};
use specperturb::numkernel::{norm2, SeededRng};
use specperturb::sensing::{measure, MeasurementOperator};
use specperturb::subspace;
use specperturb::synthgen::{block_affinity, sparse_cloud, BlockAffinitySpec, SparseCloudSpec};

fn c2() {
    let mut angles = Vec::new();
    for seed in 0..50u64 {
        let (w0, _) = block_affinity(&BlockAffinitySpec { block_sizes: vec![15, 15], eps: 0.0, seed }).unwrap();
        let (wt, _) = block_affinity(&BlockAffinitySpec { block_sizes: vec![15, 15], eps: 0.1, seed }).unwrap();
        let pa = normalize_affinity(&w0).unwrap();
        let pt = normalize_affinity(&wt).unwrap();
        let ea = spectral_embed(&pa, 1, true).unwrap();
        let et = spectral_embed(&pt, 1, true).unwrap();
        let th = subspace::canonical_angles(&ea.vk, &et.vk).unwrap()[0];
        angles.push(th);
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    println!("C2 median angle: {:.4}  (max {:.4})", angles[25], angles[49]);
}

fn c3() {
    let mut hits = 0;
    let mut dists = Vec::new();
    let mut angs = Vec::new();
    for seed in 0..50u64 {
        let (w0, _) = block_affinity(&BlockAffinitySpec { block_sizes: vec![10, 10, 10], eps: 0.0, seed }).unwrap();
        let (wt, _) = block_affinity(&BlockAffinitySpec { block_sizes: vec![10, 10, 10], eps: 0.1, seed }).unwrap();
        let pa = normalize_affinity(&w0).unwrap();
        let pt = normalize_affinity(&wt).unwrap();
        let ea = spectral_embed(&pa, 2, true).unwrap();
        let et = spectral_embed(&pt, 2, true).unwrap();
        let v2: Vec<f64> = ea.vk.column(0);
        let vt2: Vec<f64> = et.vk.column(0);
        let dplus: f64 = v2.iter().zip(&vt2).map(|(&a, &b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let dminus: f64 = v2.iter().zip(&vt2).map(|(&a, &b)| (a + b) * (a + b)).sum::<f64>().sqrt();
        let dist = dplus.min(dminus);
        let ang = subspace::compare(&ea.vk, &et.vk).unwrap().max_angle();
        dists.push(dist);
        angs.push(ang);
        if dist > 0.5 && ang <= 0.15 {
            hits += 1;
        }
        let _ = norm2(&v2);
    }
    let fmax = |v: &Vec<f64>| v.iter().cloned().fold(0.0f64, f64::max);
    println!("C3 hits: {hits}/50   max angle {:.3}  max dist {:.3}", fmax(&angs), fmax(&dists));
}

fn c5(points: usize, dim: usize, s: usize, noise: f64, trials: u64) {
    let grid = [8usize, 16, 32, 64, 128, 256, 512, 1024];
    let mut means = Vec::new();
    for &m in &grid {
        let mut acc = 0.0;
        for t in 0..trials {
            let data = sparse_cloud(&SparseCloudSpec {
                n_points: points, dim, sparsity: s, clusters: 3, noise,
                basis_seed: 100_000 + t, point_seed: t,
            })
            .unwrap();
            let op = MeasurementOperator::gaussian(m, dim, 200_000 + t).unwrap();
            let measured = measure(&data, &op).unwrap();
            let config = ClusterConfig::new(3).with_drop_first(false);
            let r = cluster_pipeline(&measured, &config, &mut SeededRng::new(400_000 + t)).unwrap();
            acc += r.rho.unwrap();
        }
        means.push(acc / trials as f64);
    }
    println!("C5 (N={points} n={dim} s={s} noise={noise}): {:?}", means.iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>());
}

fn main() {
    let which: String = std::env::args().nth(1).unwrap_or_else(|| "all".into());
    if which == "c2" || which == "all" { c2(); }
    if which == "c3" || which == "all" { c3(); }
    if which == "c5" || which == "all" {
        c5(120, 256, 3, 0.5, 8);
        c5(120, 256, 3, 1.0, 8);
        c5(120, 256, 8, 1.0, 8);
        c5(120, 512, 3, 0.8, 8);
    }
}

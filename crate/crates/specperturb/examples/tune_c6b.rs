use specperturb::affinity::DataMatrix;
use specperturb::completion::{default_lambda_schedule, sample_mask, soft_impute, PartialMatrix};
use specperturb::embedding::{cluster_pipeline, ClusterConfig};
use specperturb::numkernel::SeededRng;
use specperturb::synthgen::{lowrank_images, LowRankSpec, RankInflation};
use std::time::Instant;

fn run(seed: u64, inflate: Option<RankInflation>) {
    let spec = LowRankSpec {
        n_points: 1000,
        dim: 500,
        rank: 3,
        clusters: 3,
        noise: 0.05,
        seed,
        inflate: inflate.clone(),
    };
    let data = lowrank_images(&spec).unwrap();
    let t = Instant::now();
    let mut rng = SeededRng::new(300_000 + seed);
    let mask = sample_mask(1000, 500, 0.1, &mut rng).unwrap();
    let observed = PartialMatrix::observe(&data.x, mask).unwrap();
    let schedule = default_lambda_schedule(&observed);
    let result = soft_impute(&observed, &schedule, 1e-6, 500).unwrap();
    let rel = result.xhat.sub(&data.x).unwrap().frobenius_norm() / data.x.frobenius_norm();
    let completed = DataMatrix::new(result.xhat, data.labels.clone(), None).unwrap();
    let config = ClusterConfig::new(3).with_drop_first(false);
    let r = cluster_pipeline(&completed, &config, &mut SeededRng::new(400_000 + seed)).unwrap();
    println!(
        "seed={seed} inflate={:?}: {:.1?} iters={} rel={rel:.2e} rho={:.4} alpha={:.3}",
        inflate.as_ref().map(|i| i.target_rank),
        t.elapsed(),
        result.iterations,
        r.rho.unwrap(),
        r.embedding.alpha
    );
}

fn main() {
    let inf = |t, sc, dc| Some(RankInflation { target_rank: t, scale: sc, decay: dc });
    for seed in [1u64, 2] {
        run(seed, None);
        run(seed, inf(12, 0.5, 0.9));
        run(seed, inf(24, 0.5, 0.9));
        run(seed, inf(48, 0.5, 0.9));
    }
}

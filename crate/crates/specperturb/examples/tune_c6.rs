use specperturb::affinity::DataMatrix;
use specperturb::completion::{default_lambda_schedule, sample_mask, soft_impute, PartialMatrix};
use specperturb::embedding::{cluster_pipeline, ClusterConfig};
use specperturb::numkernel::SeededRng;
use specperturb::synthgen::{lowrank_images, LowRankSpec};
use std::time::Instant;

fn main() {
    // One seed of the criterion-6 pipeline at full size, timed per stage.
    let t0 = Instant::now();
    let spec = LowRankSpec {
        n_points: 1000, dim: 500, rank: 3, clusters: 3,
        noise: 0.05, seed: 1, inflate: None,
    };
    let data = lowrank_images(&spec).unwrap();
    println!("gen: {:?}", t0.elapsed());

    let t1 = Instant::now();
    let mut rng = SeededRng::new(300_001);
    let mask = sample_mask(1000, 500, 0.1, &mut rng).unwrap();
    let observed = PartialMatrix::observe(&data.x, mask).unwrap();
    let schedule = default_lambda_schedule(&observed);
    let result = soft_impute(&observed, &schedule, 1e-6, 500).unwrap();
    let gamma = result.xhat.sub(&data.x).unwrap().frobenius_norm();
    let rel = gamma / data.x.frobenius_norm();
    println!("complete: {:?} iters={} rel_err={:.3e} converged={}", t1.elapsed(), result.iterations, rel, result.converged);

    let t2 = Instant::now();
    let completed = DataMatrix::new(result.xhat, data.labels.clone(), None).unwrap();
    let config = ClusterConfig::new(3).with_drop_first(false);
    let r = cluster_pipeline(&completed, &config, &mut SeededRng::new(400_001)).unwrap();
    println!("cluster: {:?} rho={:?} alpha={:.4}", t2.elapsed(), r.rho, r.embedding.alpha);
    println!("total: {:?}", t0.elapsed());
}

use crate::io;
use crate::report::{manifest_json, Manifest, Report};
use crate::{
    parse_sigma, CliError, ClusterArgs, CompareArgs, CompleteArgs, CompressArgs, GenBlocksArgs,
    GenLowrankArgs, GenSparseArgs, SweepCommand, SweepFractionArgs, SweepMeasurementsArgs,
    SweepRankArgs, VerifyCommand, VerifyCsArgs, VerifyMcArgs, VerifyPairArgs, VerifyPairKArgs,
};
use serde_json::json;
use specperturb::affinity::{normalize_affinity, perturbed_affinity, AffinityPack, DataMatrix};
use specperturb::bounds;
use specperturb::completion::{
    default_lambda_schedule, geometric_schedule, sample_mask, soft_impute, CompletionResult,
    PartialMatrix,
};
use specperturb::embedding::{cluster_pipeline, spectral_embed, ClusterConfig};
use specperturb::numkernel::{Matrix, SeededRng};
use specperturb::sensing::{measure, MeasurementOperator};
use specperturb::subspace;
use specperturb::synthgen::{
    block_affinity, lowrank_images, sparse_cloud, BlockAffinitySpec, LowRankSpec, RankInflation,
    SparseCloudSpec,
};
use std::path::Path;

// Sub-seed offsets for deriving independent streams from one base seed.
const SEED_BASIS: u64 = 100_000;
const SEED_PHI: u64 = 200_000;
const SEED_MASK: u64 = 300_000;
const SEED_KMEANS: u64 = 400_000;

pub fn gen_blocks(args: GenBlocksArgs) -> Result<(), CliError> {
    let spec = BlockAffinitySpec { block_sizes: args.sizes.clone(), eps: args.eps, seed: args.seed };
    let (w, labels) = block_affinity(&spec)?;
    io::write_atomic(&args.output, &io::format_matrix(&w))?;
    if let Some(path) = &args.labels {
        io::write_atomic(path, &io::format_labels(&labels))?;
    }
    let manifest = Manifest::new("gen blocks")
        .set("sizes", json!(args.sizes))
        .set("eps", json!(args.eps))
        .set("seed", json!(args.seed))
        .set("output", json!(args.output.display().to_string()))
        .set("labels", json!(args.labels.as_ref().map(|p| p.display().to_string())));
    io::write_atomic(&io::manifest_path(&args.output), &manifest_json(manifest))
}

pub fn gen_sparse(args: GenSparseArgs) -> Result<(), CliError> {
    let spec = SparseCloudSpec {
        n_points: args.points,
        dim: args.dim,
        sparsity: args.sparsity,
        clusters: args.clusters,
        noise: args.noise,
        basis_seed: args.basis_seed,
        point_seed: args.point_seed,
    };
    let data = sparse_cloud(&spec)?;
    io::write_atomic(&args.output, &io::format_matrix(&data.x))?;
    if let Some(path) = &args.labels {
        io::write_atomic(path, &io::format_labels(data.labels.as_ref().expect("generator labels")))?;
    }
    let manifest = Manifest::new("gen sparse")
        .set("points", json!(args.points))
        .set("dim", json!(args.dim))
        .set("sparsity", json!(args.sparsity))
        .set("clusters", json!(args.clusters))
        .set("noise", json!(args.noise))
        .set("basis_seed", json!(args.basis_seed))
        .set("point_seed", json!(args.point_seed))
        .set("output", json!(args.output.display().to_string()));
    io::write_atomic(&io::manifest_path(&args.output), &manifest_json(manifest))
}

pub fn gen_lowrank(args: GenLowrankArgs) -> Result<(), CliError> {
    let inflate = args.inflate_rank.map(|target_rank| RankInflation {
        target_rank,
        scale: args.inflate_scale,
        decay: args.inflate_decay,
    });
    let spec = LowRankSpec {
        n_points: args.points,
        dim: args.dim,
        rank: args.rank,
        clusters: args.clusters,
        noise: args.noise,
        seed: args.seed,
        inflate,
    };
    let data = lowrank_images(&spec)?;
    io::write_atomic(&args.output, &io::format_matrix(&data.x))?;
    if let Some(path) = &args.labels {
        io::write_atomic(path, &io::format_labels(data.labels.as_ref().expect("generator labels")))?;
    }
    let manifest = Manifest::new("gen lowrank")
        .set("points", json!(args.points))
        .set("dim", json!(args.dim))
        .set("rank", json!(args.rank))
        .set("clusters", json!(args.clusters))
        .set("noise", json!(args.noise))
        .set("seed", json!(args.seed))
        .set("inflate_rank", json!(args.inflate_rank))
        .set("inflate_scale", json!(args.inflate_scale))
        .set("inflate_decay", json!(args.inflate_decay))
        .set("output", json!(args.output.display().to_string()));
    io::write_atomic(&io::manifest_path(&args.output), &manifest_json(manifest))
}

fn load_data(input: &Path, labels: Option<&Path>) -> Result<DataMatrix, CliError> {
    let x = io::read_matrix(input)?;
    let labels = match labels {
        Some(path) => {
            let l = io::read_labels(path)?;
            if l.len() != x.rows() {
                return Err(CliError::usage(format!(
                    "{} has {} labels for {} data rows",
                    path.display(),
                    l.len(),
                    x.rows()
                )));
            }
            Some(l)
        }
        None => None,
    };
    DataMatrix::new(x, labels, None).map_err(CliError::from)
}

pub fn cluster(args: ClusterArgs) -> Result<(), CliError> {
    let sigma_opt = parse_sigma(&args.sigma)?;
    let data = load_data(&args.input, args.labels.as_deref())?;
    let config = ClusterConfig::new(args.k)
        .with_sigma(sigma_opt)
        .with_drop_first(args.drop_first)
        .with_normalize_rows(args.normalize_rows)
        .with_restarts(args.restarts);
    let mut rng = SeededRng::new(args.seed);
    let result = cluster_pipeline(&data, &config, &mut rng)?;

    io::write_atomic(&args.output.join("embedding.csv"), &io::format_matrix(&result.embedding.vk))?;
    io::write_atomic(&args.output.join("labels.csv"), &io::format_labels(&result.assignment.labels))?;

    let manifest = Manifest::new("cluster")
        .set("input", json!(args.input.display().to_string()))
        .set("labels", json!(args.labels.as_ref().map(|p| p.display().to_string())))
        .set("sigma", json!(args.sigma))
        .set("sigma_resolved", json!(result.sigma))
        .set("k", json!(args.k))
        .set("seed", json!(args.seed))
        .set("restarts", json!(args.restarts))
        .set("drop_first", json!(args.drop_first))
        .set("normalize_rows", json!(args.normalize_rows))
        .set("output", json!(args.output.display().to_string()));
    let mut report = Report::new(manifest);
    report.set_embedding(&result.embedding, result.sigma, Some(&result.assignment));
    if let Some(rho) = result.rho {
        report.set_rho(rho);
    }
    io::write_atomic(&args.output.join("report.json"), &report.to_json())
}

pub fn compress(args: CompressArgs) -> Result<(), CliError> {
    let data = load_data(&args.input, None)?;
    let op = MeasurementOperator::gaussian(args.measurements, data.dim(), args.seed)?;
    let measured = measure(&data, &op)?;
    io::write_atomic(&args.output, &io::format_matrix(&measured.x))?;
    let manifest = Manifest::new("compress")
        .set("input", json!(args.input.display().to_string()))
        .set("m", json!(args.measurements))
        .set("n", json!(data.dim()))
        .set("seed", json!(args.seed))
        .set("output", json!(args.output.display().to_string()));
    io::write_atomic(&io::manifest_path(&args.output), &manifest_json(manifest))
}

pub fn complete(args: CompleteArgs) -> Result<(), CliError> {
    let (observed, mode) = match (&args.input, &args.full) {
        (Some(mask_path), None) => {
            let shape = args.shape.as_ref().ok_or_else(|| {
                CliError::usage("--shape N,n is required with --input".to_string())
            })?;
            if shape.len() != 2 {
                return Err(CliError::usage("--shape takes exactly two values".to_string()));
            }
            (io::read_mask_csv(mask_path, (shape[0], shape[1]))?, "mask")
        }
        (None, Some(full_path)) => {
            let x = io::read_matrix(full_path)?;
            let p = args.p.expect("clap enforces --p with --full");
            let mut rng = SeededRng::new(args.seed.wrapping_add(SEED_MASK));
            let mask = sample_mask(x.rows(), x.cols(), p, &mut rng)?;
            let observed = PartialMatrix::observe(&x, mask)?;
            if let Some(path) = &args.mask_out {
                io::write_atomic(path, &io::format_mask_csv(&observed))?;
            }
            (observed, "full")
        }
        _ => {
            return Err(CliError::usage(
                "exactly one of --input (with --shape) or --full (with -p) is required".to_string(),
            ))
        }
    };

    let schedule = build_schedule(&observed, args.steps, args.lambda_min_ratio);
    let result = soft_impute(&observed, &schedule, args.tol, args.max_iter)?;
    io::write_atomic(&args.output, &io::format_matrix(&result.xhat))?;
    let manifest = Manifest::new("complete")
        .set("mode", json!(mode))
        .set("input", json!(args.input.as_ref().map(|p| p.display().to_string())))
        .set("full", json!(args.full.as_ref().map(|p| p.display().to_string())))
        .set("shape", json!([result.xhat.rows(), result.xhat.cols()]))
        .set("p", json!(observed.mask.p()))
        .set("seed", json!(args.seed))
        .set("steps", json!(args.steps))
        .set("lambda_min_ratio", json!(args.lambda_min_ratio))
        .set("tol", json!(args.tol))
        .set("max_iter", json!(args.max_iter))
        .set("output", json!(args.output.display().to_string()))
        .set(
            "result",
            json!({
                "iterations": result.iterations,
                "lambda_final": result.lambda_final,
                "observed_residual": result.observed_residual,
                "converged": result.converged,
            }),
        );
    io::write_atomic(&io::manifest_path(&args.output), &manifest_json(manifest))
}

fn build_schedule(observed: &PartialMatrix, steps: usize, min_ratio: f64) -> Vec<f64> {
    if steps == specperturb::completion::DEFAULT_SCHEDULE_STEPS
        && min_ratio == specperturb::completion::DEFAULT_LAMBDA_MIN_RATIO
    {
        return default_lambda_schedule(observed);
    }
    let default = default_lambda_schedule(observed);
    let sigma1 = default[0] * 2.0;
    if sigma1 <= 0.0 {
        return vec![1.0];
    }
    geometric_schedule(sigma1 * 0.5, sigma1 * min_ratio, steps.max(1))
}

fn load_normalized(path: &Path) -> Result<AffinityPack, CliError> {
    let w = io::read_matrix(path)?;
    normalize_affinity(&w).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn compare(args: CompareArgs) -> Result<(), CliError> {
    let pack_a = load_normalized(&args.a)?;
    let pack_b = load_normalized(&args.b)?;
    let ea = spectral_embed(&pack_a, args.k, args.drop_first)?;
    let eb = spectral_embed(&pack_b, args.k, args.drop_first)?;
    let comparison = subspace::compare(&ea.vk, &eb.vk)?;
    let manifest = Manifest::new("compare")
        .set("first", json!(args.a.display().to_string()))
        .set("second", json!(args.b.display().to_string()))
        .set("k", json!(args.k))
        .set("drop_first", json!(args.drop_first))
        .set("output", json!(args.output.display().to_string()));
    let mut report = Report::new(manifest);
    report.set_comparison(&comparison);
    io::write_atomic(&args.output, &report.to_json())
}

pub fn verify(cmd: VerifyCommand) -> Result<(), CliError> {
    match cmd {
        VerifyCommand::Stewart(args) => verify_stewart(args),
        VerifyCommand::Sintheta(args) => verify_pair_k(args, "verify sintheta"),
        VerifyCommand::Embed(args) => verify_pair_k(args, "verify embed"),
        VerifyCommand::Cs(args) => verify_cs(args),
        VerifyCommand::Mc(args) => verify_mc(args),
    }
}

fn finish_verify(report: Report, output: &Path, strict: bool) -> Result<(), CliError> {
    let collapsed = report
        .bound_reports()
        .iter()
        .any(|r| !r.satisfied && r.notes.contains("eigengap collapsed"));
    io::write_atomic(output, &report.to_json())?;
    if strict && collapsed {
        return Err(CliError::numerical(
            "eigengap collapsed; bound unverifiable (strict mode)".to_string(),
        ));
    }
    Ok(())
}

fn verify_stewart(args: VerifyPairArgs) -> Result<(), CliError> {
    let pack_a = load_normalized(&args.a)?;
    let pack_b = load_normalized(&args.b)?;
    let bound = bounds::check_stewart(&pack_a, &pack_b, args.slack_factor)?;
    let manifest = Manifest::new("verify stewart")
        .set("first", json!(args.a.display().to_string()))
        .set("second", json!(args.b.display().to_string()))
        .set("slack_factor", json!(args.slack_factor))
        .set("strict", json!(args.strict))
        .set("output", json!(args.output.display().to_string()));
    let mut report = Report::new(manifest);
    report.push_bound(bound);
    finish_verify(report, &args.output, args.strict)
}

fn verify_pair_k(args: VerifyPairKArgs, name: &str) -> Result<(), CliError> {
    let pack_a = load_normalized(&args.a)?;
    let pack_b = load_normalized(&args.b)?;
    let (r1, r2) = if name.ends_with("sintheta") {
        bounds::check_sin_theta(&pack_a.a, &pack_b.a, args.k)?
    } else {
        bounds::check_embedding(&pack_a.a, &pack_b.a, args.k)?
    };
    let manifest = Manifest::new(name)
        .set("first", json!(args.a.display().to_string()))
        .set("second", json!(args.b.display().to_string()))
        .set("k", json!(args.k))
        .set("strict", json!(args.strict))
        .set("output", json!(args.output.display().to_string()));
    let mut report = Report::new(manifest);
    report.push_bound(r1);
    report.push_bound(r2);
    finish_verify(report, &args.output, args.strict)
}

fn verify_cs(args: VerifyCsArgs) -> Result<(), CliError> {
    let data = load_data(&args.input, None)?;
    let sigma = data.resolve_sigma(parse_sigma(&args.sigma)?)?;
    let op = MeasurementOperator::gaussian(args.measurements, data.dim(), args.seed)?;
    let (r1, r2) = bounds::check_cs_affinity(&data, &op, sigma)?;
    let manifest = Manifest::new("verify cs")
        .set("input", json!(args.input.display().to_string()))
        .set("sigma", json!(args.sigma))
        .set("sigma_resolved", json!(sigma))
        .set("m", json!(args.measurements))
        .set("n", json!(data.dim()))
        .set("seed", json!(args.seed))
        .set("output", json!(args.output.display().to_string()));
    let mut report = Report::new(manifest);
    report.push_bound(r1);
    report.push_bound(r2);
    io::write_atomic(&args.output, &report.to_json())
}

fn verify_mc(args: VerifyMcArgs) -> Result<(), CliError> {
    let data = load_data(&args.input, None)?;
    let xhat = io::read_matrix(&args.xhat)?;
    let sigma = data.resolve_sigma(parse_sigma(&args.sigma)?)?;
    let theoretical = match (args.p, args.delta_noise) {
        (Some(p), Some(delta)) => Some(
            specperturb::completion::completion_error_bound(p, data.n_points(), data.dim(), delta)
                .map_err(CliError::from)?,
        ),
        _ => None,
    };
    let bound = bounds::check_mc_affinity(&data, &xhat, sigma, theoretical)?;
    let manifest = Manifest::new("verify mc")
        .set("input", json!(args.input.display().to_string()))
        .set("xhat", json!(args.xhat.display().to_string()))
        .set("sigma", json!(args.sigma))
        .set("sigma_resolved", json!(sigma))
        .set("p", json!(args.p))
        .set("delta_noise", json!(args.delta_noise))
        .set("output", json!(args.output.display().to_string()));
    let mut report = Report::new(manifest);
    report.push_bound(bound);
    io::write_atomic(&args.output, &report.to_json())
}

pub fn sweep(cmd: SweepCommand) -> Result<(), CliError> {
    match cmd {
        SweepCommand::Measurements(args) => sweep_measurements(args),
        SweepCommand::Rank(args) => sweep_rank(args),
        SweepCommand::Fraction(args) => sweep_fraction(args),
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn format_curve(rows: &[(String, f64, f64, usize)]) -> String {
    let mut out = String::new();
    for (param, mean, std, trials) in rows {
        out.push_str(&format!("{param},{mean:.16e},{std:.16e},{trials}\n"));
    }
    out
}

fn complete_full(x: &Matrix, p: f64, mask_seed: u64) -> Result<CompletionResult, CliError> {
    let mut rng = SeededRng::new(mask_seed);
    let mask = sample_mask(x.rows(), x.cols(), p, &mut rng)?;
    let observed = PartialMatrix::observe(x, mask)?;
    let schedule = default_lambda_schedule(&observed);
    soft_impute(
        &observed,
        &schedule,
        specperturb::completion::DEFAULT_TOL,
        specperturb::completion::DEFAULT_MAX_ITER,
    )
    .map_err(CliError::from)
}

fn sweep_measurements(args: SweepMeasurementsArgs) -> Result<(), CliError> {
    if args.metric != "rho" && args.metric != "vdist" {
        return Err(CliError::usage(format!(
            "--metric must be rho or vdist, got {:?}",
            args.metric
        )));
    }
    let k = args.k.unwrap_or(args.clusters);
    let mut per_m: Vec<Vec<f64>> = vec![Vec::new(); args.m_grid.len()];

    for t in 0..args.trials as u64 {
        let spec = SparseCloudSpec {
            n_points: args.points,
            dim: args.dim,
            sparsity: args.sparsity,
            clusters: args.clusters,
            noise: args.noise,
            basis_seed: args.seed + SEED_BASIS + t,
            point_seed: args.seed + t,
        };
        let data = sparse_cloud(&spec)?;
        // Baseline top-k eigenvectors of the unperturbed affinity.
        let baseline = if args.metric == "vdist" {
            let sigma = data.resolve_sigma(None)?;
            let pack = perturbed_affinity(&data, sigma)?;
            Some(spectral_embed(&pack, k, false)?)
        } else {
            None
        };
        // Optional completion stage before measuring.
        let source = match args.observe_p {
            Some(p) => {
                let completed = complete_full(&data.x, p, args.seed + SEED_MASK + t)?;
                DataMatrix::new(completed.xhat, data.labels.clone(), None)?
            }
            None => data.clone(),
        };
        for (mi, &m) in args.m_grid.iter().enumerate() {
            let op = MeasurementOperator::gaussian(m, source.dim(), args.seed + SEED_PHI + t)?;
            let measured = measure(&source, &op)?;
            let value = match args.metric.as_str() {
                "rho" => {
                    let config = ClusterConfig::new(args.clusters).with_drop_first(false);
                    let mut rng = SeededRng::new(args.seed + SEED_KMEANS + t);
                    let result = cluster_pipeline(&measured, &config, &mut rng)?;
                    result.rho.expect("generator provides labels")
                }
                _ => {
                    let sigma_m = measured.resolve_sigma(None)?;
                    let pack_m = perturbed_affinity(&measured, sigma_m)?;
                    let embed_m = spectral_embed(&pack_m, k, false)?;
                    let base = baseline.as_ref().expect("baseline computed for vdist");
                    let (_, dist2, _) = subspace::procrustes_align(&base.vk, &embed_m.vk)?;
                    dist2
                }
            };
            per_m[mi].push(value);
        }
    }

    let rows: Vec<(String, f64, f64, usize)> = args
        .m_grid
        .iter()
        .zip(&per_m)
        .map(|(&m, vals)| {
            let (mean, std) = mean_std(vals);
            (m.to_string(), mean, std, vals.len())
        })
        .collect();
    io::write_atomic(&args.output, &format_curve(&rows))?;
    let manifest = Manifest::new("sweep measurements")
        .set("points", json!(args.points))
        .set("dim", json!(args.dim))
        .set("sparsity", json!(args.sparsity))
        .set("clusters", json!(args.clusters))
        .set("noise", json!(args.noise))
        .set("m_grid", json!(args.m_grid))
        .set("trials", json!(args.trials))
        .set("seed", json!(args.seed))
        .set("observe_p", json!(args.observe_p))
        .set("metric", json!(args.metric))
        .set("k", json!(k))
        .set("drop_first", json!(false))
        .set("output", json!(args.output.display().to_string()));
    io::write_atomic(&io::manifest_path(&args.output), &manifest_json(manifest))
}

fn sweep_rank(args: SweepRankArgs) -> Result<(), CliError> {
    for &r in &args.rank_grid {
        if r < args.rank {
            return Err(CliError::usage(format!(
                "rank grid value {r} is below the base rank {}",
                args.rank
            )));
        }
    }
    let mut per_r: Vec<Vec<f64>> = vec![Vec::new(); args.rank_grid.len()];
    for t in 0..args.trials as u64 {
        for (ri, &target) in args.rank_grid.iter().enumerate() {
            let inflate = (target > args.rank).then_some(RankInflation {
                target_rank: target,
                scale: args.inflate_scale,
                decay: args.inflate_decay,
            });
            let spec = LowRankSpec {
                n_points: args.points,
                dim: args.dim,
                rank: args.rank,
                clusters: args.clusters,
                noise: args.noise,
                seed: args.seed + t,
                inflate,
            };
            let data = lowrank_images(&spec)?;
            let completed = complete_full(&data.x, args.p, args.seed + SEED_MASK + t)?;
            let completed_data = DataMatrix::new(completed.xhat, data.labels.clone(), None)?;
            let config = ClusterConfig::new(args.clusters).with_drop_first(false);
            let mut rng = SeededRng::new(args.seed + SEED_KMEANS + t);
            let result = cluster_pipeline(&completed_data, &config, &mut rng)?;
            per_r[ri].push(result.rho.expect("generator provides labels"));
        }
    }
    let rows: Vec<(String, f64, f64, usize)> = args
        .rank_grid
        .iter()
        .zip(&per_r)
        .map(|(&r, vals)| {
            let (mean, std) = mean_std(vals);
            (r.to_string(), mean, std, vals.len())
        })
        .collect();
    io::write_atomic(&args.output, &format_curve(&rows))?;
    let manifest = Manifest::new("sweep rank")
        .set("points", json!(args.points))
        .set("dim", json!(args.dim))
        .set("rank", json!(args.rank))
        .set("clusters", json!(args.clusters))
        .set("noise", json!(args.noise))
        .set("rank_grid", json!(args.rank_grid))
        .set("inflate_scale", json!(args.inflate_scale))
        .set("inflate_decay", json!(args.inflate_decay))
        .set("p", json!(args.p))
        .set("trials", json!(args.trials))
        .set("seed", json!(args.seed))
        .set("drop_first", json!(false))
        .set("output", json!(args.output.display().to_string()));
    io::write_atomic(&io::manifest_path(&args.output), &manifest_json(manifest))
}

fn sweep_fraction(args: SweepFractionArgs) -> Result<(), CliError> {
    let mut per_p: Vec<Vec<f64>> = vec![Vec::new(); args.p_grid.len()];
    for t in 0..args.trials as u64 {
        let spec = LowRankSpec {
            n_points: args.points,
            dim: args.dim,
            rank: args.rank,
            clusters: args.clusters,
            noise: args.noise,
            seed: args.seed + t,
            inflate: None,
        };
        let data = lowrank_images(&spec)?;
        for (pi, &p) in args.p_grid.iter().enumerate() {
            let completed = complete_full(&data.x, p, args.seed + SEED_MASK + t)?;
            let completed_data = DataMatrix::new(completed.xhat, data.labels.clone(), None)?;
            let config = ClusterConfig::new(args.clusters).with_drop_first(false);
            let mut rng = SeededRng::new(args.seed + SEED_KMEANS + t);
            let result = cluster_pipeline(&completed_data, &config, &mut rng)?;
            per_p[pi].push(result.rho.expect("generator provides labels"));
        }
    }
    let rows: Vec<(String, f64, f64, usize)> = args
        .p_grid
        .iter()
        .zip(&per_p)
        .map(|(&p, vals)| {
            let (mean, std) = mean_std(vals);
            (p.to_string(), mean, std, vals.len())
        })
        .collect();
    io::write_atomic(&args.output, &format_curve(&rows))?;
    let manifest = Manifest::new("sweep fraction")
        .set("points", json!(args.points))
        .set("dim", json!(args.dim))
        .set("rank", json!(args.rank))
        .set("clusters", json!(args.clusters))
        .set("noise", json!(args.noise))
        .set("p_grid", json!(args.p_grid))
        .set("trials", json!(args.trials))
        .set("seed", json!(args.seed))
        .set("drop_first", json!(false))
        .set("output", json!(args.output.display().to_string()));
    io::write_atomic(&io::manifest_path(&args.output), &manifest_json(manifest))
}

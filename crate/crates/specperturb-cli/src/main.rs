//! Command-line surface for the spectral perturbation toolkit.
//!
//! Exit codes: 0 success, 1 usage error (bad arguments, missing or
//! malformed files), 2 numerical failure (non-convergence, or a collapsed
//! eigengap in a bound check run with --strict).

mod commands;
mod io;
mod report;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        CliError::Numerical(msg.into())
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<specperturb::Error> for CliError {
    fn from(e: specperturb::Error) -> Self {
        match e {
            specperturb::Error::ConvergenceFailed { .. } => CliError::numerical(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

/// Spectral clustering under compressed, incomplete and inaccurate
/// measurements, with checkable perturbation bounds.
#[derive(Parser, Debug)]
#[command(name = "specperturb", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate synthetic instances
    #[command(subcommand)]
    Gen(GenCommand),
    /// Spectral clustering of a data matrix
    Cluster(ClusterArgs),
    /// Apply Gaussian compressed-sensing measurements to data rows
    Compress(CompressArgs),
    /// Nuclear-norm matrix completion of partially observed data
    Complete(CompleteArgs),
    /// Compare the top-k eigenvector subspaces of two weight matrices
    Compare(CompareArgs),
    /// Check a perturbation bound on a concrete instance
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Parameter sweeps producing mean/std curves
    #[command(subcommand)]
    Sweep(SweepCommand),
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Block-diagonal affinity of all-ones blocks plus uniform noise
    Blocks(GenBlocksArgs),
    /// Point cloud with an s-sparse representation in a hidden basis
    Sparse(GenSparseArgs),
    /// Low-rank image-like rows with optional rank inflation
    Lowrank(GenLowrankArgs),
}

#[derive(Args, Debug)]
struct GenBlocksArgs {
    /// Comma-separated block sizes, e.g. 15,15
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Noise amplitude: perturbation entries are uniform on [0, eps]
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output weight matrix CSV
    #[arg(short, long)]
    output: PathBuf,
    /// Optional block label CSV
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenSparseArgs {
    #[arg(long)]
    points: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    sparsity: usize,
    #[arg(long)]
    clusters: usize,
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    basis_seed: u64,
    #[arg(long, default_value_t = 1)]
    point_seed: u64,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenLowrankArgs {
    #[arg(long)]
    points: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    clusters: usize,
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Inflate the spectrum up to this approximate rank
    #[arg(long)]
    inflate_rank: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    inflate_scale: f64,
    #[arg(long, default_value_t = 0.9)]
    inflate_decay: f64,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClusterArgs {
    /// Input data matrix CSV (points as rows)
    #[arg(short, long)]
    input: PathBuf,
    /// Optional ground-truth labels for the misclassification rate
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Kernel bandwidth: a positive number or "median"
    #[arg(long, default_value = "median")]
    sigma: String,
    #[arg(short = 'k', long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = specperturb::embedding::DEFAULT_RESTARTS)]
    restarts: usize,
    /// Use eigenvectors 2..k+1 instead of the top k
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    drop_first: bool,
    /// Scale embedding rows to unit norm before k-means
    #[arg(long, default_value_t = false)]
    normalize_rows: bool,
    /// Output directory (embedding.csv, labels.csv, report.json)
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct CompressArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Number of measurements
    #[arg(short = 'm', long)]
    measurements: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct CompleteArgs {
    /// Observed entries as row,col,value triples (requires --shape)
    #[arg(short, long, conflicts_with = "full")]
    input: Option<PathBuf>,
    /// Shape N,n of the matrix being completed
    #[arg(long, value_delimiter = ',')]
    shape: Option<Vec<usize>>,
    /// Alternative: sample a mask from this full matrix
    #[arg(long, requires = "p")]
    full: Option<PathBuf>,
    /// Observation fraction for --full mode
    #[arg(short = 'p', long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the sampled mask here in --full mode
    #[arg(long)]
    mask_out: Option<PathBuf>,
    #[arg(long, default_value_t = specperturb::completion::DEFAULT_SCHEDULE_STEPS)]
    steps: usize,
    #[arg(long, default_value_t = specperturb::completion::DEFAULT_LAMBDA_MIN_RATIO)]
    lambda_min_ratio: f64,
    #[arg(long, default_value_t = specperturb::completion::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = specperturb::completion::DEFAULT_MAX_ITER)]
    max_iter: usize,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// First weight matrix CSV (normalized internally)
    #[arg(short = 'a', long = "first")]
    a: PathBuf,
    /// Second weight matrix CSV
    #[arg(short = 'b', long = "second")]
    b: PathBuf,
    #[arg(short = 'k', long)]
    k: usize,
    #[arg(long, default_value_t = false)]
    drop_first: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Second-eigenvector bound on a pair of weight matrices
    Stewart(VerifyPairArgs),
    /// sin(Theta) and projection bounds for the top-k subspace
    Sintheta(VerifyPairKArgs),
    /// Procrustes embedding and row-coordinate bounds
    Embed(VerifyPairKArgs),
    /// Compressed-measurement affinity bounds on a data matrix
    Cs(VerifyCsArgs),
    /// Matrix-completion affinity bound on a data matrix and its completion
    Mc(VerifyMcArgs),
}

#[derive(Args, Debug)]
struct VerifyPairArgs {
    #[arg(short = 'a', long = "first")]
    a: PathBuf,
    #[arg(short = 'b', long = "second")]
    b: PathBuf,
    /// Stand-in constant for the unquantified quadratic remainder
    #[arg(long, default_value_t = specperturb::bounds::DEFAULT_STEWART_SLACK_FACTOR)]
    slack_factor: f64,
    /// Exit 2 when the eigengap collapses instead of recording a note
    #[arg(long, default_value_t = false)]
    strict: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyPairKArgs {
    #[arg(short = 'a', long = "first")]
    a: PathBuf,
    #[arg(short = 'b', long = "second")]
    b: PathBuf,
    #[arg(short = 'k', long)]
    k: usize,
    #[arg(long, default_value_t = false)]
    strict: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyCsArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, default_value = "median")]
    sigma: String,
    #[arg(short = 'm', long)]
    measurements: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyMcArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Completed matrix CSV
    #[arg(long)]
    xhat: PathBuf,
    #[arg(long, default_value = "median")]
    sigma: String,
    /// Observation fraction, for the theoretical recovery bound
    #[arg(short = 'p', long)]
    p: Option<f64>,
    /// Observed-entry noise level delta for the theoretical bound
    #[arg(long)]
    delta_noise: Option<f64>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Subcommand, Debug)]
enum SweepCommand {
    /// Misclassification (or subspace error) versus measurement count
    Measurements(SweepMeasurementsArgs),
    /// Misclassification versus inflated approximate rank, with completion
    Rank(SweepRankArgs),
    /// Misclassification versus observed fraction, with completion
    Fraction(SweepFractionArgs),
}

#[derive(Args, Debug)]
struct SweepMeasurementsArgs {
    #[arg(long)]
    points: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    sparsity: usize,
    #[arg(long)]
    clusters: usize,
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    /// Comma-separated measurement counts
    #[arg(long, value_delimiter = ',', required = true)]
    m_grid: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Observe this fraction and complete before measuring (Fig-10 style)
    #[arg(long)]
    observe_p: Option<f64>,
    /// rho (misclassification) or vdist (||Vt_k - V_k Q||_2)
    #[arg(long, default_value = "rho")]
    metric: String,
    /// Embedding dimension for the vdist metric (defaults to clusters)
    #[arg(short = 'k', long)]
    k: Option<usize>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct SweepRankArgs {
    #[arg(long)]
    points: usize,
    #[arg(long)]
    dim: usize,
    /// Base rank of the generated data
    #[arg(long, default_value_t = 3)]
    rank: usize,
    #[arg(long)]
    clusters: usize,
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    /// Comma-separated target approximate ranks (>= rank)
    #[arg(long, value_delimiter = ',', required = true)]
    rank_grid: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    inflate_scale: f64,
    #[arg(long, default_value_t = 0.9)]
    inflate_decay: f64,
    #[arg(short = 'p', long)]
    p: f64,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct SweepFractionArgs {
    #[arg(long)]
    points: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 3)]
    rank: usize,
    #[arg(long)]
    clusters: usize,
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    /// Comma-separated observation fractions
    #[arg(long, value_delimiter = ',', required = true)]
    p_grid: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {}", e.message());
        return e.exit_code();
    }
    let result = match cli.command {
        Command::Gen(GenCommand::Blocks(args)) => commands::gen_blocks(args),
        Command::Gen(GenCommand::Sparse(args)) => commands::gen_sparse(args),
        Command::Gen(GenCommand::Lowrank(args)) => commands::gen_lowrank(args),
        Command::Cluster(args) => commands::cluster(args),
        Command::Compress(args) => commands::compress(args),
        Command::Complete(args) => commands::complete(args),
        Command::Compare(args) => commands::compare(args),
        Command::Verify(v) => commands::verify(v),
        Command::Sweep(s) => commands::sweep(s),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

/// SPECPERTURB_THREADS caps the worker pool; default is machine parallelism.
fn configure_threads() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("SPECPERTURB_THREADS") {
        let n: usize = raw
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::usage(format!("SPECPERTURB_THREADS must be a positive integer, got {raw:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

pub(crate) fn parse_sigma(raw: &str) -> Result<Option<f64>, CliError> {
    if raw == "median" {
        return Ok(None);
    }
    let v: f64 = raw
        .parse()
        .map_err(|_| CliError::usage(format!("--sigma must be a number or \"median\", got {raw:?}")))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(CliError::usage(format!("--sigma must be positive, got {v}")));
    }
    Ok(Some(v))
}

//! Command-line front end.
//!
//! ```text
//! dantzig gen         --n 720 --p 2560 --s 80 --sigma 0.05 --design unit --seed 1 --out inst/
//! dantzig solve       --instance inst/ [--out sol/]
//! dantzig bench       --design unit --sigma 0.05 --scales 1 --instances 10 --seed 1
//! dantzig figure-data --instance inst/ --solution sol/
//! ```
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 solver failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::adm::{self, AdmConfig, AdmStatus, RunReport};
use crate::bench::{self, BenchConfig};
use crate::datagen::{self, DesignKind, GenSpec};
use crate::error::{Error, Result};
use crate::eval;
use crate::io::{self, KeyValue};
use crate::problem::Instance;
use crate::subsolver::SubsolverConfig;
use crate::vector::Vector;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

pub const X_FILE: &str = "X.mtx";
pub const Y_FILE: &str = "y.mtx";
pub const BETA_TRUE_FILE: &str = "beta_true.mtx";
pub const MANIFEST_FILE: &str = "manifest.txt";
pub const BETA_TILDE_FILE: &str = "beta_tilde.mtx";
pub const LAMBDA_FILE: &str = "lambda.mtx";
pub const BETA_HAT_FILE: &str = "beta_hat.mtx";
pub const REPORT_FILE: &str = "report.txt";
pub const HISTORY_FILE: &str = "history.csv";
pub const EVAL_FILE: &str = "eval.txt";

const FORMAT_VERSION: &str = "1";

#[derive(Debug, Parser)]
#[command(name = "dantzig", version, about = "Dantzig selector via an alternating direction method")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a simulated instance.
    Gen(GenArgs),
    /// Solve an instance directory.
    Solve(SolveArgs),
    /// Benchmark over the size grid and print one CSV row per size.
    Bench(BenchArgs),
    /// Export true and estimated coefficients for scatter plots.
    FigureData(FigureArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    /// Grid index i for (n, p, s) = (720i, 2560i, 80i); explicit sizes override it.
    #[arg(long)]
    pub scale: Option<usize>,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long, default_value = "unit")]
    pub design: DesignKind,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Clone)]
pub struct SolverFlags {
    /// Penalty parameter (default: the design's rule).
    #[arg(long)]
    pub mu: Option<f64>,
    /// Outer tolerance (default: the design's rule).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub sub_tol_factor: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_outer_iter: usize,
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub sigma_ls: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub alpha_lo: f64,
    #[arg(long, default_value_t = 1)]
    pub memory: usize,
    #[arg(long, default_value_t = 20_000)]
    pub max_inner_iter: usize,
    #[arg(long, default_value_t = 60)]
    pub max_backtracks: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Directory holding X.mtx, y.mtx and manifest.txt (beta_true.mtx optional).
    #[arg(long)]
    pub instance: PathBuf,
    /// Output directory (default: the instance directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Constraint level (default: from the manifest).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Noise level used by the refit and metrics (default: from the manifest).
    #[arg(long)]
    pub sigma: Option<f64>,
    #[command(flatten)]
    pub solver: SolverFlags,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "unit")]
    pub design: DesignKind,
    #[arg(long)]
    pub sigma: f64,
    /// Grid indices i, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub scales: Vec<usize>,
    /// Explicit size instead of the grid (requires --p and --s).
    #[arg(long, requires_all = ["p", "s"])]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub instances: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (also capped by DANTZIG_WORKERS).
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_outer_iter: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Directory with beta_true.mtx (optional contents).
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Directory with beta_tilde.mtx and beta_hat.mtx.
    #[arg(long)]
    pub solution: PathBuf,
    /// Number of off-support coordinates sampled as background.
    #[arg(long, default_value_t = 200)]
    pub background: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::NonFinite(_) => {
            EXIT_USAGE
        }
        Error::Io { .. } | Error::Parse { .. } => EXIT_IO,
        Error::LineSearchFailure(_) | Error::Generation(_) => EXIT_SOLVER,
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a).map(|_| EXIT_OK),
        Command::Solve(a) => cmd_solve(&a).map(|s| match s {
            AdmStatus::NumericalFailure => EXIT_SOLVER,
            _ => EXIT_OK,
        }),
        Command::Bench(a) => {
            let csv = cmd_bench(&a)?;
            match &a.out {
                Some(path) => std::fs::write(path, csv).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                })?,
                None => print!("{csv}"),
            }
            Ok(EXIT_OK)
        }
        Command::FigureData(a) => {
            let csv = cmd_figure_data(&a)?;
            match &a.out {
                Some(path) => std::fs::write(path, csv).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                })?,
                None => print!("{csv}"),
            }
            Ok(EXIT_OK)
        }
    }
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn gen_spec(a: &GenArgs) -> Result<GenSpec> {
    let grid = a.scale.map(|i| GenSpec::grid(i, a.sigma, a.design, a.seed));
    let pick = |explicit: Option<usize>, from_grid: Option<usize>, name: &str| {
        explicit.or(from_grid).ok_or_else(|| {
            Error::InvalidArgument(format!("--{name} is required unless --scale is given"))
        })
    };
    let spec = GenSpec {
        n: pick(a.n, grid.as_ref().map(|g| g.n), "n")?,
        p: pick(a.p, grid.as_ref().map(|g| g.p), "p")?,
        s: pick(a.s, grid.as_ref().map(|g| g.s), "s")?,
        sigma_noise: a.sigma,
        design: a.design,
        seed: a.seed,
    };
    spec.validate()?;
    Ok(spec)
}

/// Writes X, y, β_true and the manifest into `a.out`.
pub fn cmd_gen(a: &GenArgs) -> Result<GenSpec> {
    let spec = gen_spec(a)?;
    let generated = datagen::generate(&spec)?;
    create_dir(&a.out)?;
    let tag = format!(
        "design={} n={} p={} s={} sigma={} seed={}",
        spec.design, spec.n, spec.p, spec.s, spec.sigma_noise, spec.seed
    );
    io::write_matrix(&a.out.join(X_FILE), &generated.x, Some(&tag))?;
    io::write_vector(&a.out.join(Y_FILE), &generated.y, Some(&tag))?;
    io::write_vector(&a.out.join(BETA_TRUE_FILE), &generated.truth.beta_true, Some(&tag))?;

    let mut kv = KeyValue::new();
    kv.set("format_version", FORMAT_VERSION)
        .set("generator", concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")))
        .set("rng", "chacha20; streams design=0 support=1 signs=2 amplitudes=3 noise=4")
        .set("n", spec.n)
        .set("p", spec.p)
        .set("s", spec.s)
        .set("sigma", spec.sigma_noise)
        .set("design", spec.design)
        .set("seed", spec.seed);
    if spec.sigma_noise > 0.0 {
        let delta = datagen::default_delta(spec.p as f64, spec.sigma_noise)?;
        kv.set("delta", delta)
            .set("mu", datagen::default_mu(spec.design, spec.p, delta))
            .set("tol", datagen::default_tol(spec.design));
    }
    kv.set("x_file", X_FILE)
        .set("y_file", Y_FILE)
        .set("beta_true_file", BETA_TRUE_FILE);
    kv.write(&a.out.join(MANIFEST_FILE))?;
    Ok(spec)
}

/// Everything needed to rerun a solve: instance location and parameters,
/// generation recipe when known, and the full solver configuration.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub instance_dir: PathBuf,
    pub gen: Option<GenSpec>,
    pub delta: f64,
    pub sigma_noise: Option<f64>,
    pub config: AdmConfig,
}

impl RunManifest {
    pub fn to_key_value(&self) -> KeyValue {
        let mut kv = KeyValue::new();
        kv.set("format_version", FORMAT_VERSION)
            .set("solver", concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")))
            .set("instance_dir", self.instance_dir.display());
        if let Some(g) = &self.gen {
            kv.set("n", g.n)
                .set("p", g.p)
                .set("s", g.s)
                .set("design", g.design)
                .set("seed", g.seed);
        }
        if let Some(s) = self.sigma_noise {
            kv.set("sigma", s);
        }
        let c = &self.config;
        let sub = &c.subsolver;
        kv.set("delta", self.delta)
            .set("mu", c.mu)
            .set("tol", c.tol)
            .set("sub_tol_factor", c.sub_tol_factor)
            .set("max_outer_iter", c.max_outer_iter)
            .set("eta", sub.eta)
            .set("sigma_ls", sub.sigma_ls)
            .set("alpha_lo", sub.alpha_lo)
            .set("memory", sub.memory)
            .set("max_inner_iter", sub.max_inner_iter)
            .set("max_backtracks", sub.max_backtracks)
            .set("beta0", "zero")
            .set("lambda0", "zero");
        kv
    }
}

fn report_key_value(manifest: &RunManifest, report: &RunReport) -> KeyValue {
    let mut kv = manifest.to_key_value();
    kv.set("status", report.status)
        .set("outer_iterations", report.outer_iterations)
        .set("inner_iteration_total", report.inner_iteration_total)
        .set("subsolver_failures", report.subsolver_failures)
        .set("final_metric", report.final_metric)
        .set("wall_time_s", report.wall_time);
    kv
}

fn history_csv(report: &RunReport) -> String {
    let mut out = String::from("iteration,stopping_metric,dual_objective\n");
    for (k, (m, d)) in report
        .stopping_metric_history
        .iter()
        .zip(&report.dual_objective_history)
        .enumerate()
    {
        let _ = writeln!(out, "{},{m:e},{d:e}", k + 1);
    }
    out
}

fn read_manifest(dir: &Path) -> Result<Option<KeyValue>> {
    let path = dir.join(MANIFEST_FILE);
    if path.exists() {
        KeyValue::read(&path).map(Some)
    } else {
        Ok(None)
    }
}

fn gen_from_manifest(kv: &KeyValue, path: &Path) -> Option<GenSpec> {
    Some(GenSpec {
        n: kv.parse("n", path).ok()?,
        p: kv.parse("p", path).ok()?,
        s: kv.parse("s", path).ok()?,
        sigma_noise: kv.parse("sigma", path).ok()?,
        design: kv.parse("design", path).ok()?,
        seed: kv.parse("seed", path).ok()?,
    })
}

fn solver_config(
    flags: &SolverFlags,
    design: Option<DesignKind>,
    p: usize,
    delta: f64,
) -> Result<AdmConfig> {
    let mu = match (flags.mu, design) {
        (Some(mu), _) => mu,
        (None, Some(d)) => datagen::default_mu(d, p, delta),
        (None, None) => {
            return Err(Error::InvalidArgument(
                "--mu is required when the manifest has no design kind".into(),
            ))
        }
    };
    let tol = match (flags.tol, design) {
        (Some(t), _) => t,
        (None, Some(d)) => datagen::default_tol(d),
        (None, None) => datagen::default_tol(DesignKind::UnitColumns),
    };
    let config = AdmConfig {
        mu,
        tol,
        sub_tol_factor: flags.sub_tol_factor,
        max_outer_iter: flags.max_outer_iter,
        subsolver: SubsolverConfig {
            eta: flags.eta,
            sigma_ls: flags.sigma_ls,
            alpha_lo: flags.alpha_lo,
            memory: flags.memory,
            max_inner_iter: flags.max_inner_iter,
            max_backtracks: flags.max_backtracks,
            ..SubsolverConfig::default()
        },
    };
    config.validate()?;
    Ok(config)
}

/// Solves an instance directory and writes β̃, λ, β̂, the run report, the
/// metric history and, when β_true is present, the evaluation.
pub fn cmd_solve(a: &SolveArgs) -> Result<AdmStatus> {
    let manifest_path = a.instance.join(MANIFEST_FILE);
    let manifest = read_manifest(&a.instance)?;
    let x = io::read_matrix(&a.instance.join(X_FILE))?;
    let y = io::read_vector(&a.instance.join(Y_FILE))?;
    let p = x.ncols();

    let from_manifest = |key: &str| -> Option<f64> {
        manifest.as_ref().and_then(|kv| kv.parse(key, &manifest_path).ok())
    };
    let sigma = a.sigma.or_else(|| from_manifest("sigma")).filter(|s| *s > 0.0);
    let delta = match a.delta.or_else(|| from_manifest("delta")) {
        Some(d) => d,
        None => match sigma {
            Some(s) => datagen::default_delta(p as f64, s)?,
            None => {
                return Err(Error::InvalidArgument(
                    "no delta: pass --delta or --sigma, or provide them in the manifest".into(),
                ))
            }
        },
    };
    let design: Option<DesignKind> = manifest
        .as_ref()
        .and_then(|kv| kv.parse("design", &manifest_path).ok());
    let config = solver_config(&a.solver, design, p, delta)?;
    let inst = Instance::new(x, y, delta)?;

    let sol = adm::solve(&inst, &config, None, None)?;
    let out = a.out.clone().unwrap_or_else(|| a.instance.clone());
    create_dir(&out)?;

    let run = RunManifest {
        instance_dir: a.instance.clone(),
        gen: manifest.as_ref().and_then(|kv| gen_from_manifest(kv, &manifest_path)),
        delta,
        sigma_noise: sigma,
        config,
    };
    let status = sol.report.status;
    let note = format!("status={status}");
    io::write_vector(&out.join(BETA_TILDE_FILE), sol.beta(), Some(&note))?;
    io::write_vector(&out.join(LAMBDA_FILE), sol.lambda(), Some(&note))?;
    report_key_value(&run, &sol.report).write(&out.join(REPORT_FILE))?;
    let history_path = out.join(HISTORY_FILE);
    std::fs::write(&history_path, history_csv(&sol.report)).map_err(|e| Error::Io {
        path: history_path,
        source: e,
    })?;

    if status == AdmStatus::NumericalFailure {
        eprintln!("solver hit non-finite values; partial outputs written to {}", out.display());
        return Ok(status);
    }
    if status == AdmStatus::MaxIter {
        log::warn!("iteration cap reached before tolerance");
    }

    if let Some(sigma) = sigma {
        let truth_path = a.instance.join(BETA_TRUE_FILE);
        if truth_path.exists() {
            let truth = io::read_vector(&truth_path)?;
            let (refit, scores) = eval::evaluate(&inst, sol.beta(), &truth, sigma)?;
            io::write_vector(&out.join(BETA_HAT_FILE), &refit.beta_hat, None)?;
            let mut kv = KeyValue::new();
            kv.set("rho2_orig", scores.rho2_orig)
                .set("rho2", scores.rho2)
                .set("support_true_size", scores.support_true.len())
                .set("support_estimated_size", scores.support_estimated.len())
                .set("true_positives", scores.true_positives)
                .set("false_positives", scores.false_positives)
                .set("underdetermined_refit", scores.underdetermined);
            kv.write(&out.join(EVAL_FILE))?;
        } else {
            let refit = eval::two_stage(sol.beta(), &inst, sigma)?;
            io::write_vector(&out.join(BETA_HAT_FILE), &refit.beta_hat, None)?;
        }
    }
    Ok(status)
}

pub fn cmd_bench(a: &BenchArgs) -> Result<String> {
    let sizes = match (a.n, a.p, a.s) {
        (Some(n), Some(p), Some(s)) => vec![(n, p, s)],
        _ => a.scales.iter().map(|&i| (720 * i, 2560 * i, 80 * i)).collect(),
    };
    if sizes.iter().any(|&(n, _, _)| n == 0) {
        return Err(Error::InvalidArgument("grid indices start at 1".into()));
    }
    let config = BenchConfig {
        design: a.design,
        sigma_noise: a.sigma,
        sizes,
        instances: a.instances,
        base_seed: a.seed,
        workers: a.workers,
        max_outer_iter: a.max_outer_iter,
    };
    let (rows, _) = bench::run(&config)?;
    Ok(bench::to_csv(&rows))
}

fn nonzero_indices(v: &Vector) -> Vec<usize> {
    (0..v.len()).filter(|&j| v[j] != 0.0).collect()
}

pub fn cmd_figure_data(a: &FigureArgs) -> Result<String> {
    let tilde = io::read_vector(&a.solution.join(BETA_TILDE_FILE))?;
    let p = tilde.len();
    let hat_path = a.solution.join(BETA_HAT_FILE);
    let hat = if hat_path.exists() {
        Some(io::read_vector(&hat_path)?)
    } else {
        None
    };
    let truth = match &a.instance {
        Some(dir) if dir.join(BETA_TRUE_FILE).exists() => {
            Some(io::read_vector(&dir.join(BETA_TRUE_FILE))?)
        }
        _ => None,
    };
    for v in hat.iter().chain(truth.iter()) {
        if v.len() != p {
            return Err(Error::DimensionMismatch {
                context: "figure data",
                expected: p,
                actual: v.len(),
            });
        }
    }

    let mut keep = vec![false; p];
    let estimated = match &hat {
        Some(h) => nonzero_indices(h),
        None => {
            let cut = 1e-8 * tilde.amax();
            (0..p).filter(|&j| tilde[j].abs() > cut).collect()
        }
    };
    for j in estimated {
        keep[j] = true;
    }
    if let Some(t) = &truth {
        for j in nonzero_indices(t) {
            keep[j] = true;
        }
    }
    let rest: Vec<usize> = (0..p).filter(|&j| !keep[j]).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    for k in index::sample(&mut rng, rest.len(), a.background.min(rest.len())) {
        keep[rest[k]] = true;
    }

    let mut out = String::from("index");
    if truth.is_some() {
        out.push_str(",beta_true");
    }
    out.push_str(",beta_tilde");
    if hat.is_some() {
        out.push_str(",beta_hat");
    }
    out.push('\n');
    for j in (0..p).filter(|&j| keep[j]) {
        let _ = write!(out, "{j}");
        if let Some(t) = &truth {
            let _ = write!(out, ",{:e}", t[j]);
        }
        let _ = write!(out, ",{:e}", tilde[j]);
        if let Some(h) = &hat {
            let _ = write!(out, ",{:e}", h[j]);
        }
        out.push('\n');
    }
    Ok(out)
}

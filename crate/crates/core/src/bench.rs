//! Batch benchmark over the `(720i, 2560i, 80i)` size grid: generate,
//! solve with the design's default parameters, refit, and average.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::adm::{self, AdmConfig, AdmStatus};
use crate::datagen::{self, DesignKind, GenSpec};
use crate::error::{Error, Result};
use crate::eval;

/// Environment variable capping the benchmark worker count.
pub const WORKERS_ENV: &str = "DANTZIG_WORKERS";

pub const CSV_HEADER: &str =
    "design,sigma,n,p,s,instances,iter_mean,cpu_mean_s,rho2_mean,rho2_orig_mean,failures";

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub design: DesignKind,
    pub sigma_noise: f64,
    /// `(n, p, s)` triples, one output row each.
    pub sizes: Vec<(usize, usize, usize)>,
    pub instances: usize,
    /// Instance `r` of every grid point uses seed `base_seed + r`.
    pub base_seed: u64,
    pub workers: usize,
    pub max_outer_iter: usize,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.instances == 0 {
            return Err(Error::InvalidArgument("need at least one instance per size".into()));
        }
        if self.sizes.is_empty() {
            return Err(Error::InvalidArgument("empty size grid".into()));
        }
        if !(self.sigma_noise > 0.0) {
            return Err(Error::InvalidArgument(
                "benchmarks need a positive noise level".into(),
            ));
        }
        Ok(())
    }
}

/// Default solver settings for a generated instance.
pub fn default_config(design: DesignKind, p: usize, delta: f64) -> AdmConfig {
    AdmConfig::new(datagen::default_mu(design, p, delta), datagen::default_tol(design))
}

#[derive(Debug, Clone)]
pub struct InstanceResult {
    pub seed: u64,
    pub status: AdmStatus,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub wall_time: f64,
    pub rho2: f64,
    pub rho2_orig: f64,
}

/// Generates and solves one instance. Timing covers the solve only.
pub fn run_instance(spec: &GenSpec, max_outer_iter: usize) -> Result<InstanceResult> {
    let generated = datagen::generate(spec)?;
    let inst = generated.instance()?;
    let mut config = default_config(spec.design, spec.p, inst.delta());
    config.max_outer_iter = max_outer_iter;
    let sol = adm::solve(&inst, &config, None, None)?;
    let (_, scores) = eval::evaluate(&inst, sol.beta(), &generated.truth.beta_true, spec.sigma_noise)?;
    Ok(InstanceResult {
        seed: spec.seed,
        status: sol.report.status,
        outer_iterations: sol.report.outer_iterations,
        inner_iterations: sol.report.inner_iteration_total,
        wall_time: sol.report.wall_time,
        rho2: scores.rho2,
        rho2_orig: scores.rho2_orig,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub design: DesignKind,
    pub sigma_noise: f64,
    pub n: usize,
    pub p: usize,
    pub s: usize,
    pub n_instances: usize,
    pub iter: f64,
    pub cpu: f64,
    pub rho2: f64,
    pub rho2_orig: f64,
    pub failures: usize,
}

impl BenchRow {
    /// Averages converged runs; everything else counts as a failure.
    pub fn from_results(
        design: DesignKind,
        sigma_noise: f64,
        (n, p, s): (usize, usize, usize),
        results: &[Result<InstanceResult>],
    ) -> Self {
        let ok: Vec<&InstanceResult> = results
            .iter()
            .filter_map(|r| r.as_ref().ok())
            .filter(|r| r.status == AdmStatus::Converged)
            .collect();
        let mean = |f: &dyn Fn(&InstanceResult) -> f64| {
            if ok.is_empty() {
                f64::NAN
            } else {
                ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64
            }
        };
        Self {
            design,
            sigma_noise,
            n,
            p,
            s,
            n_instances: results.len(),
            iter: mean(&|r| r.outer_iterations as f64),
            cpu: mean(&|r| r.wall_time),
            rho2: mean(&|r| r.rho2),
            rho2_orig: mean(&|r| r.rho2_orig),
            failures: results.len() - ok.len(),
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.2},{:.3},{:.6},{:.6},{}",
            self.design,
            self.sigma_noise,
            self.n,
            self.p,
            self.s,
            self.n_instances,
            self.iter,
            self.cpu,
            self.rho2,
            self.rho2_orig,
            self.failures
        )
    }
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv());
    }
    out
}

/// Worker count: the request, capped by [`WORKERS_ENV`] when set, at least 1.
pub fn effective_workers(requested: usize) -> usize {
    let cap = std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|v| *v > 0);
    let n = match cap {
        Some(c) => requested.min(c),
        None => requested,
    };
    n.max(1)
}

/// Runs the whole grid. Results are collected in seed order, so rows do not
/// depend on scheduling.
pub fn run(config: &BenchConfig) -> Result<(Vec<BenchRow>, Vec<Vec<Result<InstanceResult>>>)> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(effective_workers(config.workers))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let mut rows = Vec::with_capacity(config.sizes.len());
    let mut all = Vec::with_capacity(config.sizes.len());
    for &(n, p, s) in &config.sizes {
        let specs: Vec<GenSpec> = (0..config.instances as u64)
            .map(|r| GenSpec {
                n,
                p,
                s,
                sigma_noise: config.sigma_noise,
                design: config.design,
                seed: config.base_seed.wrapping_add(r),
            })
            .collect();
        let results: Vec<Result<InstanceResult>> = pool.install(|| {
            specs
                .par_iter()
                .map(|spec| run_instance(spec, config.max_outer_iter))
                .collect()
        });
        for (spec, r) in specs.iter().zip(&results) {
            match r {
                Ok(res) if res.status != AdmStatus::Converged => {
                    log::warn!("seed {}: solver ended with {}", spec.seed, res.status)
                }
                Err(e) => log::warn!("seed {}: {e}", spec.seed),
                _ => {}
            }
        }
        rows.push(BenchRow::from_results(
            config.design,
            config.sigma_noise,
            (n, p, s),
            &results,
        ));
        all.push(results);
    }
    Ok((rows, all))
}

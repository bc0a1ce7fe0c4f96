//! Alternating direction method for the Dantzig selector.
//!
//! The problem is split as `min ||β||_1` subject to `XᵀXβ − Xᵀy − z = 0`,
//! `||D⁻¹z||_∞ ≤ δ`. Each outer iteration
//!
//! 1. projects `XᵀXβ − Xᵀy + λ/μ` onto the box `|z_j| ≤ δ d_j`,
//! 2. approximately minimizes the augmented Lagrangian over β with the
//!    nonmonotone gradient method of [`crate::subsolver`], warm-started at
//!    the previous β,
//! 3. takes the multiplier step `λ ← λ + μ(XᵀXβ − Xᵀy − z)`.
//!
//! Iteration stops once the relative duality gap, primal infeasibility and
//! dual infeasibility (see [`stopping_metric`]) all fall below `tol`.

use std::time::Instant;

use crate::error::{check_len, Error, Result};
use crate::problem::Instance;
use crate::subsolver::{solve_subproblem, SubStatus, SubproblemObjective, SubsolverConfig};
use crate::vector::{all_finite, box_clamp, norm1, norm_inf, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct AdmConfig {
    /// Penalty parameter of the augmented Lagrangian.
    pub mu: f64,
    /// Outer tolerance on the stopping metric.
    pub tol: f64,
    /// Inner tolerance is `sub_tol_factor * tol`.
    pub sub_tol_factor: f64,
    pub max_outer_iter: usize,
    /// Inner solver settings; its `tol_sub` is overwritten from `tol`.
    pub subsolver: SubsolverConfig,
}

impl AdmConfig {
    pub fn new(mu: f64, tol: f64) -> Self {
        Self {
            mu,
            tol,
            sub_tol_factor: 0.1,
            max_outer_iter: 10_000,
            subsolver: SubsolverConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidArgument(format!("mu must be positive, got {}", self.mu)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.sub_tol_factor > 0.0 && self.sub_tol_factor <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "sub_tol_factor must lie in (0, 1], got {}",
                self.sub_tol_factor
            )));
        }
        if self.max_outer_iter == 0 {
            return Err(Error::InvalidArgument("max_outer_iter must be positive".into()));
        }
        self.inner_config().validate()
    }

    pub fn inner_config(&self) -> SubsolverConfig {
        SubsolverConfig {
            tol_sub: self.sub_tol_factor * self.tol,
            ..self.subsolver.clone()
        }
    }
}

/// Iterate of the outer method.
#[derive(Debug, Clone)]
pub struct AdmState {
    pub beta: Vector,
    pub z: Vector,
    pub lambda: Vector,
    pub iteration: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmStatus {
    Converged,
    MaxIter,
    NumericalFailure,
}

impl AdmStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            AdmStatus::Converged => "converged",
            AdmStatus::MaxIter => "max_iter",
            AdmStatus::NumericalFailure => "numerical_failure",
        }
    }
}

impl std::fmt::Display for AdmStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub outer_iterations: usize,
    pub inner_iteration_total: usize,
    /// Stopping metric after each outer iteration.
    pub stopping_metric_history: Vec<f64>,
    /// `d(λ^k)` after each outer iteration.
    pub dual_objective_history: Vec<f64>,
    /// Stopping metric of the returned pair (also covers zero-iteration runs).
    pub final_metric: f64,
    /// Inner solves that ended without reaching their tolerance.
    pub subsolver_failures: usize,
    /// Wall-clock seconds spent in the solve.
    pub wall_time: f64,
    pub status: AdmStatus,
}

#[derive(Debug, Clone)]
pub struct AdmSolution {
    pub state: AdmState,
    pub report: RunReport,
}

impl AdmSolution {
    pub fn beta(&self) -> &Vector {
        &self.state.beta
    }

    pub fn lambda(&self) -> &Vector {
        &self.state.lambda
    }
}

/// Borrowed view of one completed outer iteration, for observers.
#[derive(Debug)]
pub struct AdmStep<'a> {
    /// Index `k` of the iteration that produced `(z^{k+1}, β^{k+1}, λ^{k+1})`.
    pub k: usize,
    pub beta_prev: &'a Vector,
    pub lambda_prev: &'a Vector,
    pub z: &'a Vector,
    pub beta: &'a Vector,
    pub lambda: &'a Vector,
    /// `XᵀXβ^{k+1} − Xᵀy − z^{k+1}`.
    pub residual: &'a Vector,
    pub metric: f64,
    pub dual_objective: f64,
    pub inner_iterations: usize,
    pub inner_status: SubStatus,
}

fn check_p(inst: &Instance, context: &'static str, v: &Vector) -> Result<()> {
    check_len(context, inst.p(), v.len())
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")))
    }
}

/// `L_μ(z, β, λ) = ||β||_1 + λᵀr + (μ/2)||r||²` with `r = XᵀXβ − Xᵀy − z`.
pub fn augmented_lagrangian(
    inst: &Instance,
    z: &Vector,
    beta: &Vector,
    lambda: &Vector,
    mu: f64,
) -> Result<f64> {
    check_p(inst, "augmented_lagrangian z", z)?;
    check_p(inst, "augmented_lagrangian lambda", lambda)?;
    check_mu(mu)?;
    let r = inst.apply_gram(beta)? - inst.xty() - z;
    Ok(norm1(beta) + lambda.dot(&r) + 0.5 * mu * r.norm_squared())
}

/// Closed-form minimizer of `L_μ(·, β, λ)` over `||D⁻¹z||_∞ ≤ δ`.
pub fn update_z(inst: &Instance, beta: &Vector, lambda: &Vector, mu: f64) -> Result<Vector> {
    check_p(inst, "update_z lambda", lambda)?;
    check_mu(mu)?;
    let w = inst.apply_gram(beta)? - inst.xty() + lambda / mu;
    box_clamp(&w, &(inst.col_norms() * inst.delta()))
}

fn z_from_gram(inst: &Instance, gram_beta: &Vector, lambda: &Vector, mu: f64) -> Vector {
    let delta = inst.delta();
    Vector::from_iterator(
        inst.p(),
        gram_beta
            .iter()
            .zip(inst.xty().iter())
            .zip(lambda.iter())
            .zip(inst.col_norms().iter())
            .map(|(((a, c), l), d)| {
                let b = delta * d;
                (a - c + l / mu).max(-b).min(b)
            }),
    )
}

/// `d(λ) = −yᵀXλ − δ Σ_j d_j |λ_j|`.
pub fn dual_objective(inst: &Instance, lambda: &Vector) -> Result<f64> {
    check_p(inst, "dual_objective", lambda)?;
    Ok(dual_value(inst.xty(), inst.col_norms(), inst.delta(), lambda))
}

pub(crate) fn dual_value(xty: &Vector, d: &Vector, delta: f64, lambda: &Vector) -> f64 {
    let weighted: f64 = d.iter().zip(lambda.iter()).map(|(a, b)| a * b.abs()).sum();
    -xty.dot(lambda) - delta * weighted
}

/// `||XᵀXλ||_∞ − 1`; negative when λ is strictly dual feasible.
pub fn dual_infeasibility(inst: &Instance, lambda: &Vector) -> Result<f64> {
    Ok(norm_inf(&inst.apply_gram(lambda)?) - 1.0)
}

/// Maximum of the relative duality gap, the scaled primal infeasibility and
/// the scaled dual infeasibility of `(β, λ)`.
pub fn stopping_metric(inst: &Instance, beta: &Vector, lambda: &Vector) -> Result<f64> {
    check_p(inst, "stopping_metric lambda", lambda)?;
    let gram_beta = inst.apply_gram(beta)?;
    let gram_lambda = inst.apply_gram(lambda)?;
    Ok(metric_from(inst, beta, &gram_beta, lambda, &gram_lambda).0)
}

/// Returns `(metric, d(λ))`.
fn metric_from(
    inst: &Instance,
    beta: &Vector,
    gram_beta: &Vector,
    lambda: &Vector,
    gram_lambda: &Vector,
) -> (f64, f64) {
    let l1 = norm1(beta);
    let dual = dual_value(inst.xty(), inst.col_norms(), inst.delta(), lambda);
    let gap = (l1 - dual).abs() / l1.max(1.0);
    let primal = (inst.scaled_norm_inf(&(gram_beta - inst.xty())) - inst.delta()) / beta.norm().max(1.0);
    let dual_inf = (norm_inf(gram_lambda) - 1.0) / lambda.norm().max(1.0);
    (gap.max(primal).max(dual_inf), dual)
}

/// `λ + μ(XᵀXβ − Xᵀy − z)`.
pub fn update_lambda(
    inst: &Instance,
    lambda: &Vector,
    beta_next: &Vector,
    z_next: &Vector,
    mu: f64,
) -> Result<Vector> {
    check_p(inst, "update_lambda lambda", lambda)?;
    check_p(inst, "update_lambda z", z_next)?;
    check_mu(mu)?;
    let r = inst.apply_gram(beta_next)? - inst.xty() - z_next;
    Ok(lambda + r * mu)
}

/// Runs the method from `(β⁰, λ⁰)`; `None` means the zero vector.
pub fn solve(
    inst: &Instance,
    config: &AdmConfig,
    beta0: Option<&Vector>,
    lambda0: Option<&Vector>,
) -> Result<AdmSolution> {
    solve_observed(inst, config, beta0, lambda0, |_| {})
}

/// [`solve`] with a callback after every outer iteration.
pub fn solve_observed<F>(
    inst: &Instance,
    config: &AdmConfig,
    beta0: Option<&Vector>,
    lambda0: Option<&Vector>,
    mut observe: F,
) -> Result<AdmSolution>
where
    F: FnMut(&AdmStep),
{
    config.validate()?;
    let p = inst.p();
    let mut beta = beta0.cloned().unwrap_or_else(|| Vector::zeros(p));
    let mut lambda = lambda0.cloned().unwrap_or_else(|| Vector::zeros(p));
    check_p(inst, "initial beta", &beta)?;
    check_p(inst, "initial lambda", &lambda)?;
    if !all_finite(beta.as_slice()) || !all_finite(lambda.as_slice()) {
        return Err(Error::NonFinite("initial iterate"));
    }

    let start = Instant::now();
    let inner = config.inner_config();
    let mu = config.mu;
    let mut scratch = Vector::zeros(inst.n());
    let mut gram_beta = Vector::zeros(p);
    let mut gram_lambda = Vector::zeros(p);
    inst.gram_into(&beta, &mut scratch, &mut gram_beta);
    inst.gram_into(&lambda, &mut scratch, &mut gram_lambda);

    let (mut metric, _) = metric_from(inst, &beta, &gram_beta, &lambda, &gram_lambda);
    let mut z = z_from_gram(inst, &gram_beta, &lambda, mu);
    let mut report = RunReport {
        outer_iterations: 0,
        inner_iteration_total: 0,
        stopping_metric_history: Vec::new(),
        dual_objective_history: Vec::new(),
        final_metric: metric,
        subsolver_failures: 0,
        wall_time: 0.0,
        status: AdmStatus::MaxIter,
    };
    if metric <= config.tol {
        report.status = AdmStatus::Converged;
    }

    let mut k = 0;
    while report.status != AdmStatus::Converged && k < config.max_outer_iter {
        z = z_from_gram(inst, &gram_beta, &lambda, mu);
        let objective = SubproblemObjective::new(inst, z.clone(), lambda.clone(), mu)?;
        let outcome = solve_subproblem(&objective, &beta, &inner)?;
        report.inner_iteration_total += outcome.iterations;
        if !outcome.status.is_success() {
            report.subsolver_failures += 1;
            log::debug!("outer {k}: inner solve ended with {:?}", outcome.status);
        }

        let beta_next = outcome.u;
        let mut gram_next = Vector::zeros(p);
        inst.gram_into(&beta_next, &mut scratch, &mut gram_next);
        let residual = &gram_next - inst.xty() - &z;
        let lambda_next = &lambda + &residual * mu;
        let mut gram_lambda_next = Vector::zeros(p);
        inst.gram_into(&lambda_next, &mut scratch, &mut gram_lambda_next);

        if outcome.status == SubStatus::NonFinite
            || !all_finite(beta_next.as_slice())
            || !all_finite(lambda_next.as_slice())
            || !all_finite(gram_lambda_next.as_slice())
        {
            report.status = AdmStatus::NumericalFailure;
            break;
        }

        let (m, dual) = metric_from(inst, &beta_next, &gram_next, &lambda_next, &gram_lambda_next);
        observe(&AdmStep {
            k,
            beta_prev: &beta,
            lambda_prev: &lambda,
            z: &z,
            beta: &beta_next,
            lambda: &lambda_next,
            residual: &residual,
            metric: m,
            dual_objective: dual,
            inner_iterations: outcome.iterations,
            inner_status: outcome.status,
        });

        beta = beta_next;
        lambda = lambda_next;
        gram_beta = gram_next;
        metric = m;
        report.stopping_metric_history.push(m);
        report.dual_objective_history.push(dual);
        k += 1;
        if !m.is_finite() {
            report.status = AdmStatus::NumericalFailure;
            break;
        }
        if m <= config.tol {
            report.status = AdmStatus::Converged;
        }
    }

    report.outer_iterations = k;
    report.final_metric = metric;
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(AdmSolution {
        state: AdmState {
            beta,
            z,
            lambda,
            iteration: k,
        },
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::DesignMatrix;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_instance(rng: &mut ChaCha8Rng, n: usize, p: usize, delta: f64) -> Instance {
        let x = DesignMatrix::from_fn(n, p, |_, _| rng.random_range(-1.0..1.0));
        let y = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        Instance::new(x, y, delta).unwrap()
    }

    fn rand_vec(rng: &mut ChaCha8Rng, p: usize) -> Vector {
        Vector::from_fn(p, |_, _| rng.random_range(-1.0..1.0))
    }

    fn dense_gram(inst: &Instance) -> DMatrix<f64> {
        let x = inst.x();
        x.transpose() * x
    }

    #[test]
    fn lagrangian_trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = random_instance(&mut rng, 4, 6, 0.5);
        let zero = Vector::zeros(6);
        let z = -inst.xty();
        assert!(augmented_lagrangian(&inst, &z, &zero, &zero, 2.0).unwrap().abs() <= 1e-15);
        let z = rand_vec(&mut rng, 6);
        let expected = 0.5 * 2.0 * (inst.xty() + &z).norm_squared();
        let got = augmented_lagrangian(&inst, &z, &zero, &zero, 2.0).unwrap();
        assert!((got - expected).abs() <= 1e-12);
    }

    #[test]
    fn lagrangian_matches_dense_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let inst = random_instance(&mut rng, 5, 7, 0.5);
        let g = dense_gram(&inst);
        let (z, b, l) = (rand_vec(&mut rng, 7), rand_vec(&mut rng, 7), rand_vec(&mut rng, 7));
        let xty = inst.x().transpose() * inst.y();
        let r = &g * &b - xty - &z;
        let expected: f64 =
            b.iter().map(|v| v.abs()).sum::<f64>() + l.dot(&r) + 0.35 * r.dot(&r);
        let got = augmented_lagrangian(&inst, &z, &b, &l, 0.7).unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected.abs().max(1.0));
    }

    #[test]
    fn z_update_inactive_constraint() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = random_instance(&mut rng, 4, 6, 1e12);
        let (b, l) = (rand_vec(&mut rng, 6), rand_vec(&mut rng, 6));
        let z = update_z(&inst, &b, &l, 3.0).unwrap();
        let unclipped = inst.apply_gram(&b).unwrap() - inst.xty() + &l / 3.0;
        assert_eq!(z, unclipped);

        // interior start: β = λ = 0 and ||D⁻¹Xᵀy||_∞ ≤ δ
        let big = inst.scaled_norm_inf(inst.xty()) * 2.0;
        let inst = inst.with_delta(big).unwrap();
        let zero = Vector::zeros(6);
        assert_eq!(update_z(&inst, &zero, &zero, 1.0).unwrap(), -inst.xty());
    }

    #[test]
    fn z_update_is_per_coordinate_minimizer() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let inst = random_instance(&mut rng, 6, 10, 0.05);
        let (b, l) = (rand_vec(&mut rng, 10), rand_vec(&mut rng, 10));
        let mu = 1.3;
        let z = update_z(&inst, &b, &l, mu).unwrap();
        // L_μ separates over z_j as −λ_j z_j + (μ/2)(a_j − z_j)² up to constants;
        // the minimizer of a convex scalar quadratic on an interval is found analytically.
        let a = dense_gram(&inst) * &b - inst.x().transpose() * inst.y();
        for j in 0..10 {
            let bound = inst.delta() * inst.col_norms()[j];
            let vertex = a[j] + l[j] / mu;
            let best = if vertex < -bound {
                -bound
            } else if vertex > bound {
                bound
            } else {
                vertex
            };
            assert!((z[j] - best).abs() <= 1e-12);
        }
        let base = augmented_lagrangian(&inst, &z, &b, &l, mu).unwrap();
        for _ in 0..100 {
            let cand = Vector::from_fn(10, |j, _| {
                inst.delta() * inst.col_norms()[j] * rng.random_range(-1.0..1.0)
            });
            assert!(base <= augmented_lagrangian(&inst, &cand, &b, &l, mu).unwrap() + 1e-12);
        }
    }

    #[test]
    fn dual_objective_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inst = random_instance(&mut rng, 5, 8, 0.3);
        assert_eq!(dual_objective(&inst, &Vector::zeros(8)).unwrap(), 0.0);
        let l = rand_vec(&mut rng, 8);
        let xl = inst.x() * &l;
        assert!(
            (dual_value(inst.xty(), inst.col_norms(), 0.0, &l) + inst.y().dot(&xl)).abs() <= 1e-12
        );
        let dmat = DMatrix::from_diagonal(inst.col_norms());
        let expected = -inst.y().dot(&xl) - 0.3 * (dmat * &l).iter().map(|v| v.abs()).sum::<f64>();
        assert!((dual_objective(&inst, &l).unwrap() - expected).abs() <= 1e-12);
        assert!(dual_objective(&inst, &Vector::zeros(3)).is_err());
    }

    #[test]
    fn dual_infeasibility_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let inst = random_instance(&mut rng, 4, 6, 0.3);
        assert_eq!(dual_infeasibility(&inst, &Vector::zeros(6)).unwrap(), -1.0);
        // orthogonal X (a rotation): XᵀX = I
        let (c, s) = (0.6, 0.8);
        let x = DesignMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let rot = Instance::new(x, Vector::zeros(2), 1.0).unwrap();
        let e1 = Vector::from_vec(vec![1.0, 0.0]);
        assert!(dual_infeasibility(&rot, &e1).unwrap().abs() <= 1e-15);
        let l = rand_vec(&mut rng, 6);
        let expected = (dense_gram(&inst) * &l).amax() - 1.0;
        assert!((dual_infeasibility(&inst, &l).unwrap() - expected).abs() <= 1e-12);
    }

    #[test]
    fn stopping_metric_degenerate_and_reevaluated() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = DesignMatrix::from_fn(4, 6, |_, _| rng.random_range(-1.0..1.0));
        let inst = Instance::new(x, Vector::zeros(4), 0.2).unwrap();
        let zero = Vector::zeros(6);
        assert_eq!(stopping_metric(&inst, &zero, &zero).unwrap(), 0.0);

        let inst = random_instance(&mut rng, 5, 9, 0.2);
        let g = dense_gram(&inst);
        let (b, l) = (rand_vec(&mut rng, 9), rand_vec(&mut rng, 9) * 0.1);
        let xty = inst.x().transpose() * inst.y();
        let l1: f64 = b.iter().map(|v| v.abs()).sum();
        let dual = -xty.dot(&l)
            - 0.2 * (0..9).map(|j| inst.col_norms()[j] * l[j].abs()).sum::<f64>();
        let t1 = (l1 - dual).abs() / l1.max(1.0);
        let corr = &g * &b - &xty;
        let scaled = (0..9).map(|j| (corr[j] / inst.col_norms()[j]).abs()).fold(0.0, f64::max);
        let t2 = (scaled - 0.2) / b.norm().max(1.0);
        let t3 = ((&g * &l).amax() - 1.0) / l.norm().max(1.0);
        let expected = t1.max(t2).max(t3);
        let got = stopping_metric(&inst, &b, &l).unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected.max(1.0));
    }

    #[test]
    fn lambda_update_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let inst = random_instance(&mut rng, 5, 7, 0.2);
        let (b, l) = (rand_vec(&mut rng, 7), rand_vec(&mut rng, 7));
        let z_exact = inst.apply_gram(&b).unwrap() - inst.xty();
        let same = update_lambda(&inst, &l, &b, &z_exact, 3.0).unwrap();
        assert!((&same - &l).amax() <= 1e-15);
        let z = rand_vec(&mut rng, 7);
        let from_zero = update_lambda(&inst, &Vector::zeros(7), &b, &z, 1.0).unwrap();
        let expected = dense_gram(&inst) * &b - inst.x().transpose() * inst.y() - &z;
        assert!((&from_zero - &expected).amax() <= 1e-12);
        assert!(update_lambda(&inst, &l, &b, &z, 0.0).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(AdmConfig::new(1.0, 1e-3).validate().is_ok());
        assert!(AdmConfig::new(0.0, 1e-3).validate().is_err());
        assert!(AdmConfig::new(1.0, 0.0).validate().is_err());
        let mut c = AdmConfig::new(1.0, 1e-3);
        c.sub_tol_factor = 1.5;
        assert!(c.validate().is_err());
        c.sub_tol_factor = 0.1;
        c.max_outer_iter = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn zero_response_gives_zero_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = DesignMatrix::from_fn(10, 30, |_, _| rng.random_range(-1.0..1.0));
        let inst = Instance::new(x, Vector::zeros(10), 0.1).unwrap();
        let cfg = AdmConfig::new(1.0, 1e-3);
        let sol = solve(&inst, &cfg, None, None).unwrap();
        assert_eq!(sol.report.status, AdmStatus::Converged);
        assert!(norm1(sol.beta()) <= cfg.tol);
    }

    #[test]
    fn max_iter_status_and_history() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let inst = random_instance(&mut rng, 8, 20, 0.01);
        let mut cfg = AdmConfig::new(1.0, 1e-12);
        cfg.max_outer_iter = 3;
        let sol = solve(&inst, &cfg, None, None).unwrap();
        assert_eq!(sol.report.status, AdmStatus::MaxIter);
        assert_eq!(sol.report.outer_iterations, 3);
        assert_eq!(sol.report.stopping_metric_history.len(), 3);
        assert_eq!(sol.report.dual_objective_history.len(), 3);
    }
}

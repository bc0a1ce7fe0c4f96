//! Two-stage refit and recovery-error metrics.

use nalgebra::{DMatrix, SVD};

use crate::adm::dual_objective;
use crate::error::{check_len, Error, Result};
use crate::problem::Instance;
use crate::vector::{norm1, norm_inf, Vector};

/// Output of the truncate-then-refit selector.
#[derive(Debug, Clone)]
pub struct TwoStage {
    pub beta_hat: Vector,
    /// Indices kept after truncation, ascending.
    pub support: Vec<usize>,
    /// The kept support is larger than `n`; the refit is the minimum-norm
    /// least-squares solution.
    pub underdetermined: bool,
}

/// Keeps entries with `|β̃_j| > 2σ` and refits them by least squares on
/// the corresponding columns of X. Everything else is set to zero.
pub fn two_stage(beta_tilde: &Vector, inst: &Instance, sigma_noise: f64) -> Result<TwoStage> {
    check_len("two_stage", inst.p(), beta_tilde.len())?;
    if !(sigma_noise > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "two-stage threshold needs a positive noise level, got {sigma_noise}"
        )));
    }
    let cut = 2.0 * sigma_noise;
    let support: Vec<usize> = beta_tilde
        .iter()
        .enumerate()
        .filter(|(_, b)| b.abs() > cut)
        .map(|(j, _)| j)
        .collect();
    let mut beta_hat = Vector::zeros(inst.p());
    if support.is_empty() {
        return Ok(TwoStage {
            beta_hat,
            support,
            underdetermined: false,
        });
    }
    let underdetermined = support.len() > inst.n();
    let x_sub = inst.x().select_columns(&support);
    let coef = least_squares_min_norm(x_sub, inst.y())?;
    for (k, &j) in support.iter().enumerate() {
        beta_hat[j] = coef[k];
    }
    Ok(TwoStage {
        beta_hat,
        support,
        underdetermined,
    })
}

fn least_squares_min_norm(a: DMatrix<f64>, b: &Vector) -> Result<Vector> {
    let (rows, cols) = a.shape();
    let svd = SVD::new(a, true, true);
    let cutoff = svd.singular_values.max() * rows.max(cols) as f64 * f64::EPSILON;
    svd.solve(b, cutoff)
        .map_err(|e| Error::InvalidArgument(format!("least-squares refit failed: {e}")))
}

/// `Σ(β_est − β_true)² / Σ min(β_true_j², σ²)`.
pub fn rho_metrics(beta_est: &Vector, beta_true: &Vector, sigma_noise: f64) -> Result<f64> {
    check_len("rho_metrics", beta_true.len(), beta_est.len())?;
    let s2 = sigma_noise * sigma_noise;
    let denom: f64 = beta_true.iter().map(|b| (b * b).min(s2)).sum();
    if !(denom > 0.0) {
        return Err(Error::InvalidArgument(
            "ideal risk is zero (β_true = 0 or σ = 0)".into(),
        ));
    }
    Ok((beta_est - beta_true).norm_squared() / denom)
}

#[derive(Debug, Clone)]
pub struct EvalResult {
    pub rho2_orig: f64,
    pub rho2: f64,
    pub support_estimated: Vec<usize>,
    pub support_true: Vec<usize>,
    pub true_positives: usize,
    pub false_positives: usize,
    pub underdetermined: bool,
}

/// Runs the two-stage refit on `beta_tilde` and scores both estimates.
pub fn evaluate(
    inst: &Instance,
    beta_tilde: &Vector,
    beta_true: &Vector,
    sigma_noise: f64,
) -> Result<(TwoStage, EvalResult)> {
    let refit = two_stage(beta_tilde, inst, sigma_noise)?;
    let rho2_orig = rho_metrics(beta_tilde, beta_true, sigma_noise)?;
    let rho2 = rho_metrics(&refit.beta_hat, beta_true, sigma_noise)?;
    let support_true: Vec<usize> = (0..beta_true.len()).filter(|&j| beta_true[j] != 0.0).collect();
    let true_positives = refit
        .support
        .iter()
        .filter(|j| support_true.binary_search(j).is_ok())
        .count();
    let result = EvalResult {
        rho2_orig,
        rho2,
        false_positives: refit.support.len() - true_positives,
        true_positives,
        support_estimated: refit.support.clone(),
        support_true,
        underdetermined: refit.underdetermined,
    };
    Ok((refit, result))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    /// `[‖D⁻¹Xᵀ(Xβ − y)‖_∞ − δ]_+`
    pub primal_violation: f64,
    /// `[‖XᵀXλ‖_∞ − 1]_+`
    pub dual_violation: f64,
    /// `|‖β‖₁ − d(λ)|`
    pub gap: f64,
}

pub fn feasibility_report(inst: &Instance, beta: &Vector, lambda: &Vector) -> Result<Feasibility> {
    let corr = inst.apply_gram(beta)? - inst.xty();
    let gram_lambda = inst.apply_gram(lambda)?;
    Ok(Feasibility {
        primal_violation: (inst.scaled_norm_inf(&corr) - inst.delta()).max(0.0),
        dual_violation: (norm_inf(&gram_lambda) - 1.0).max(0.0),
        gap: (norm1(beta) - dual_objective(inst, lambda)?).abs(),
    })
}

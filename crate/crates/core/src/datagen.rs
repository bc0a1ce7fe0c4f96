//! Simulated regression instances: Gaussian designs, sparse signals and
//! noisy responses, plus the default δ, μ and tolerance rules.
//!
//! Randomness comes from ChaCha20 seeded with the 64-bit instance seed. Each
//! component draws from its own stream of that generator (see [`Stream`]),
//! so the design, support, signs, amplitudes and noise can each be
//! reproduced or varied independently.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{check_len, Error, Result};
use crate::problem::{DesignMatrix, Instance};
use crate::vector::Vector;

/// ChaCha stream numbers used for each random component of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Design = 0,
    Support = 1,
    Signs = 2,
    Amplitudes = 3,
    Noise = 4,
}

/// Design retries (after a rank-deficient draw) use streams starting here.
const DESIGN_RETRY_STREAM: u64 = 16;
const MAX_DESIGN_RETRIES: u64 = 3;

pub fn rng_for(seed: u64, stream: Stream) -> ChaCha20Rng {
    rng_on(seed, stream as u64)
}

fn rng_on(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignKind {
    /// Gaussian entries, columns scaled to unit norm.
    UnitColumns,
    /// Orthonormal basis of the row space of a Gaussian matrix.
    OrthogonalRows,
}

impl DesignKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DesignKind::UnitColumns => "unit",
            DesignKind::OrthogonalRows => "ortho",
        }
    }
}

impl fmt::Display for DesignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DesignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" | "unit_columns" => Ok(DesignKind::UnitColumns),
            "ortho" | "orthogonal_rows" => Ok(DesignKind::OrthogonalRows),
            other => Err(Error::InvalidArgument(format!("unknown design kind '{other}'"))),
        }
    }
}

/// Recipe for one simulated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub p: usize,
    pub s: usize,
    pub sigma_noise: f64,
    pub design: DesignKind,
    pub seed: u64,
}

impl GenSpec {
    /// Size `(720i, 2560i, 80i)` of the benchmark grid.
    pub fn grid(i: usize, sigma_noise: f64, design: DesignKind, seed: u64) -> Self {
        Self {
            n: 720 * i,
            p: 2560 * i,
            s: 80 * i,
            sigma_noise,
            design,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(Error::InvalidArgument("n and p must be positive".into()));
        }
        if self.s > self.p {
            return Err(Error::InvalidArgument(format!(
                "sparsity s = {} exceeds p = {}",
                self.s, self.p
            )));
        }
        if !(self.sigma_noise >= 0.0) || !self.sigma_noise.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "noise level must be nonnegative, got {}",
                self.sigma_noise
            )));
        }
        if self.design == DesignKind::OrthogonalRows && self.n > self.p {
            return Err(Error::InvalidArgument(
                "orthogonal-row designs need n <= p".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub beta_true: Vector,
    /// Sorted support indices.
    pub support: Vec<usize>,
}

/// Everything generated for one instance.
#[derive(Debug, Clone)]
pub struct Generated {
    pub spec: GenSpec,
    pub x: DesignMatrix,
    pub truth: GroundTruth,
    pub noise: Vector,
    pub y: Vector,
}

impl Generated {
    /// Builds the solver instance with the default δ for this noise level.
    pub fn instance(&self) -> Result<Instance> {
        let delta = default_delta(self.spec.p as f64, self.spec.sigma_noise)?;
        Instance::new(self.x.clone(), self.y.clone(), delta)
    }
}

pub fn generate(spec: &GenSpec) -> Result<Generated> {
    spec.validate()?;
    let x = gen_design(spec)?;
    let truth = gen_signal(spec)?;
    let noise = gen_noise(spec.n, spec.sigma_noise, spec.seed);
    let y = &x * &truth.beta_true + &noise;
    Ok(Generated {
        spec: spec.clone(),
        x,
        truth,
        noise,
        y,
    })
}

fn gaussian_matrix(rng: &mut ChaCha20Rng, n: usize, p: usize) -> DesignMatrix {
    // column-major fill order
    DMatrix::from_fn(n, p, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn gen_design(spec: &GenSpec) -> Result<DesignMatrix> {
    spec.validate()?;
    match spec.design {
        DesignKind::UnitColumns => {
            let mut x = gaussian_matrix(&mut rng_for(spec.seed, Stream::Design), spec.n, spec.p);
            for mut col in x.column_iter_mut() {
                let norm = col.norm();
                col /= norm;
            }
            Ok(x)
        }
        DesignKind::OrthogonalRows => {
            let mut stream = Stream::Design as u64;
            for attempt in 0..=MAX_DESIGN_RETRIES {
                let y = gaussian_matrix(&mut rng_on(spec.seed, stream), spec.n, spec.p);
                if let Some(x) = orthonormalize_rows(&y) {
                    return Ok(x);
                }
                log::warn!("rank-deficient draw for seed {} (attempt {attempt})", spec.seed);
                stream = DESIGN_RETRY_STREAM + attempt;
            }
            Err(Error::Generation(format!(
                "no full-rank design after {MAX_DESIGN_RETRIES} retries"
            )))
        }
    }
}

/// Orthonormal basis of the row space of `y` (n ≤ p) by two passes of
/// Cholesky QR: with `YYᵀ = LLᵀ`, the rows of `L⁻¹Y` are orthonormal. The
/// second pass removes the loss of orthogonality left by the first.
/// Returns `None` when `y` is numerically rank deficient.
fn orthonormalize_rows(y: &DesignMatrix) -> Option<DesignMatrix> {
    let mut x = y.clone();
    for _ in 0..2 {
        let gram = &x * x.transpose();
        let scale = gram.diagonal().max();
        let chol = gram.cholesky()?;
        let l = chol.l();
        if l.diagonal().min() <= 1e-6 * scale.sqrt() {
            return None;
        }
        let n = l.nrows();
        let l_inv = l.solve_lower_triangular(&DMatrix::identity(n, n))?;
        x = l_inv * x;
    }
    Some(x)
}

pub fn gen_signal(spec: &GenSpec) -> Result<GroundTruth> {
    spec.validate()?;
    let mut support = index::sample(&mut rng_for(spec.seed, Stream::Support), spec.p, spec.s).into_vec();
    support.sort_unstable();
    let mut signs = rng_for(spec.seed, Stream::Signs);
    let mut amps = rng_for(spec.seed, Stream::Amplitudes);
    let mut beta = Vector::zeros(spec.p);
    for &j in &support {
        let xi = if signs.random_bool(0.5) { 1.0 } else { -1.0 };
        let a: f64 = amps.sample(StandardNormal);
        beta[j] = xi * (1.0 + a.abs());
    }
    Ok(GroundTruth {
        beta_true: beta,
        support,
    })
}

/// i.i.d. `N(0, σ²)` noise from the seed's noise stream.
pub fn gen_noise(n: usize, sigma_noise: f64, seed: u64) -> Vector {
    let mut rng = rng_for(seed, Stream::Noise);
    Vector::from_fn(n, |_, _| sigma_noise * rng.sample::<f64, _>(StandardNormal))
}

/// `y = Xβ + ε`.
pub fn gen_response(x: &DesignMatrix, beta_true: &Vector, sigma_noise: f64, seed: u64) -> Result<Vector> {
    check_len("gen_response beta", x.ncols(), beta_true.len())?;
    if !(sigma_noise >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise level must be nonnegative, got {sigma_noise}"
        )));
    }
    Ok(x * beta_true + gen_noise(x.nrows(), sigma_noise, seed))
}

/// `δ = √(2 ln p) · σ`.
pub fn default_delta(p: f64, sigma_noise: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidArgument(format!("need p > 1 for the delta rule, got {p}")));
    }
    if !(sigma_noise > 0.0) || !sigma_noise.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "delta rule needs a positive noise level, got {sigma_noise}"
        )));
    }
    Ok((2.0 * p.ln()).sqrt() * sigma_noise)
}

/// Penalty parameter: `10/(√p δ)` for unit-column designs, `1/δ` for orthogonal rows.
pub fn default_mu(design: DesignKind, p: usize, delta: f64) -> f64 {
    match design {
        DesignKind::UnitColumns => 10.0 / ((p as f64).sqrt() * delta),
        DesignKind::OrthogonalRows => 1.0 / delta,
    }
}

/// Outer tolerance paired with [`default_mu`].
pub fn default_tol(design: DesignKind) -> f64 {
    match design {
        DesignKind::UnitColumns => 1e-3,
        DesignKind::OrthogonalRows => 2e-4,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(design: DesignKind, n: usize, p: usize, s: usize) -> GenSpec {
        GenSpec {
            n,
            p,
            s,
            sigma_noise: 0.05,
            design,
            seed: 42,
        }
    }

    #[test]
    fn unit_columns_have_unit_norm() {
        let x = gen_design(&spec(DesignKind::UnitColumns, 30, 90, 5)).unwrap();
        for c in x.column_iter() {
            assert!((c.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn orthogonal_rows_are_orthonormal() {
        let sp = spec(DesignKind::OrthogonalRows, 40, 120, 5);
        let x = gen_design(&sp).unwrap();
        let err = (&x * x.transpose() - DMatrix::<f64>::identity(40, 40)).amax();
        assert!(err <= 1e-10, "{err}");
        let trace: f64 = x.column_iter().map(|c| c.norm_squared()).sum();
        assert!((trace - 40.0).abs() <= 1e-9);
    }

    #[test]
    fn orthonormalize_rejects_rank_deficient() {
        let mut y = DMatrix::from_fn(3, 6, |i, j| ((i * 7 + j * 3) % 5) as f64 + 0.5);
        let r0 = y.row(0).clone_owned();
        y.set_row(2, &(r0 * 2.0));
        assert!(orthonormalize_rows(&y).is_none());
    }

    #[test]
    fn design_is_deterministic() {
        for kind in [DesignKind::UnitColumns, DesignKind::OrthogonalRows] {
            let sp = spec(kind, 12, 40, 4);
            let a = gen_design(&sp).unwrap();
            let b = gen_design(&sp).unwrap();
            assert!(a.iter().zip(b.iter()).all(|(u, v)| u.to_bits() == v.to_bits()));
        }
    }

    #[test]
    fn signal_structure() {
        let sp = spec(DesignKind::UnitColumns, 10, 200, 25);
        let t = gen_signal(&sp).unwrap();
        assert_eq!(t.support.len(), 25);
        assert!(t.support.windows(2).all(|w| w[0] < w[1]));
        for j in 0..200 {
            if t.support.binary_search(&j).is_ok() {
                assert!(t.beta_true[j].abs() >= 1.0);
            } else {
                assert_eq!(t.beta_true[j], 0.0);
            }
        }
        let empty = gen_signal(&GenSpec { s: 0, ..sp }).unwrap();
        assert!(empty.beta_true.iter().all(|v| *v == 0.0));
        assert!(empty.support.is_empty());
    }

    #[test]
    fn signal_magnitude_mean() {
        // E|β_j| on the support is 1 + E|a| = 1 + √(2/π).
        let expected = 1.0 + (2.0 / std::f64::consts::PI).sqrt();
        let mut sum = 0.0;
        let mut count = 0usize;
        for seed in 0..1000u64 {
            let t = gen_signal(&GenSpec {
                n: 1,
                p: 200,
                s: 100,
                sigma_noise: 0.0,
                design: DesignKind::UnitColumns,
                seed,
            })
            .unwrap();
            for &j in &t.support {
                sum += t.beta_true[j].abs();
                count += 1;
            }
        }
        assert_eq!(count, 100_000);
        assert!((sum / count as f64 - expected).abs() <= 0.01);
    }

    #[test]
    fn response_cases() {
        let sp = spec(DesignKind::UnitColumns, 800, 50, 5);
        let x = gen_design(&sp).unwrap();
        let t = gen_signal(&sp).unwrap();
        assert_eq!(gen_response(&x, &t.beta_true, 0.0, 1).unwrap(), &x * &t.beta_true);
        let eps = gen_response(&x, &Vector::zeros(50), 0.05, 1).unwrap();
        let var = eps.norm_squared() / 800.0;
        assert!((var / 0.0025 - 1.0).abs() <= 0.2);
        assert_eq!(eps, gen_response(&x, &Vector::zeros(50), 0.05, 1).unwrap());
        assert!(gen_response(&x, &Vector::zeros(3), 0.05, 1).is_err());
    }

    #[test]
    fn delta_rule() {
        let e2 = std::f64::consts::E.powi(2);
        assert!((default_delta(e2, 1.0).unwrap() - 2.0).abs() <= 1e-14);
        let d = default_delta(2560.0, 0.01).unwrap();
        assert!((d - 0.039_617_578).abs() <= 1e-9, "{d}");
        assert!((default_delta(2560.0, 0.02).unwrap() - 2.0 * d).abs() <= 1e-15);
        assert!(default_delta(2560.0, 0.0).is_err());
        assert!(default_delta(1.0, 0.1).is_err());
    }

    #[test]
    fn mu_and_tol_rules() {
        let d = default_delta(2560.0, 0.01).unwrap();
        let mu = default_mu(DesignKind::UnitColumns, 2560, d);
        assert!((mu - 4.988_754).abs() <= 1e-6, "{mu}");
        assert!((default_mu(DesignKind::OrthogonalRows, 2560, 0.1) - 10.0).abs() <= 1e-12);
        assert!((default_mu(DesignKind::UnitColumns, 2560, 2.0 * d) - mu / 2.0).abs() <= 1e-12);
        assert_eq!(default_tol(DesignKind::UnitColumns), 1e-3);
        assert_eq!(default_tol(DesignKind::OrthogonalRows), 2e-4);
    }

    #[test]
    fn spec_validation() {
        let ok = spec(DesignKind::OrthogonalRows, 10, 20, 3);
        assert!(ok.validate().is_ok());
        assert!(GenSpec { s: 21, ..ok.clone() }.validate().is_err());
        assert!(GenSpec { n: 30, ..ok.clone() }.validate().is_err());
        assert!(GenSpec { sigma_noise: -1.0, ..ok.clone() }.validate().is_err());
        assert!("unit".parse::<DesignKind>().is_ok());
        assert!("orthogonal_rows".parse::<DesignKind>().is_ok());
        assert!("banded".parse::<DesignKind>().is_err());
    }
}

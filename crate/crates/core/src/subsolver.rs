//! Nonmonotone spectral gradient method for the β-subproblem
//!
//! ```text
//! min_u  f(u) + ||u||_1,   f(u) = (μ/2) ||XᵀX u − Xᵀy − z + λ/μ||²
//! ```
//!
//! Each iteration takes a soft-thresholded gradient step scaled by a
//! safeguarded Barzilai–Borwein steplength, then backtracks until the
//! objective falls below the maximum of the last `M + 1` accepted values
//! plus an Armijo term.

use std::collections::VecDeque;

use crate::error::{check_len, Error, Result};
use crate::problem::Instance;
use crate::vector::{norm1, shrink, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct SubsolverConfig {
    /// Backtracking factor, in (0, 1).
    pub eta: f64,
    /// Armijo constant of the line search, in (0, 1).
    pub sigma_ls: f64,
    /// Lower safeguard on the spectral step, in (0, 1).
    pub alpha_lo: f64,
    /// Number of past objective values (besides the current one) the line search compares against.
    pub memory: usize,
    /// Stop once the inner termination metric is at most this.
    pub tol_sub: f64,
    pub max_inner_iter: usize,
    pub max_backtracks: usize,
}

impl Default for SubsolverConfig {
    fn default() -> Self {
        Self {
            eta: 0.5,
            sigma_ls: 1e-4,
            alpha_lo: 1e-8,
            memory: 1,
            tol_sub: 1e-4,
            max_inner_iter: 20_000,
            max_backtracks: 60,
        }
    }
}

impl SubsolverConfig {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must lie in (0, 1), got {v}")))
            }
        };
        open_unit("eta", self.eta)?;
        open_unit("sigma_ls", self.sigma_ls)?;
        open_unit("alpha_lo", self.alpha_lo)?;
        if !(self.tol_sub > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tol_sub must be positive, got {}",
                self.tol_sub
            )));
        }
        if self.max_inner_iter == 0 || self.max_backtracks == 0 {
            return Err(Error::InvalidArgument(
                "iteration and backtrack caps must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// The smooth part `f_k` with its frozen data `z`, `λ`, `μ`.
///
/// Internally `f_k(u) = (μ/2)||XᵀXu − c||²` with `c = Xᵀy + z − λ/μ`.
#[derive(Debug, Clone)]
pub struct SubproblemObjective<'a> {
    inst: &'a Instance,
    z: Vector,
    lambda: Vector,
    mu: f64,
    target: Vector,
}

impl<'a> SubproblemObjective<'a> {
    pub fn new(inst: &'a Instance, z: Vector, lambda: Vector, mu: f64) -> Result<Self> {
        check_len("subproblem z", inst.p(), z.len())?;
        check_len("subproblem lambda", inst.p(), lambda.len())?;
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")));
        }
        let target = inst.xty() + &z - &lambda / mu;
        Ok(Self {
            inst,
            z,
            lambda,
            mu,
            target,
        })
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    pub fn z(&self) -> &Vector {
        &self.z
    }

    pub fn lambda(&self) -> &Vector {
        &self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `f_k(u)`.
    pub fn value(&self, u: &Vector) -> Result<f64> {
        Ok(self.evaluate(u)?.f)
    }

    /// `f_k(u) + ||u||_1`.
    pub fn total(&self, u: &Vector) -> Result<f64> {
        Ok(self.evaluate(u)?.total())
    }

    fn evaluate(&self, u: &Vector) -> Result<Point> {
        check_len("subproblem iterate", self.inst.p(), u.len())?;
        let mut ws = Workspace::new(self.inst);
        Ok(self.point(u.clone(), &mut ws))
    }

    fn point(&self, u: Vector, ws: &mut Workspace) -> Point {
        let mut gram_u = Vector::zeros(self.inst.p());
        self.inst.gram_into(&u, &mut ws.scratch_n, &mut gram_u);
        let residual = gram_u - &self.target;
        self.finish_point(u, residual, ws)
    }

    fn finish_point(&self, u: Vector, residual: Vector, ws: &mut Workspace) -> Point {
        let f = 0.5 * self.mu * residual.norm_squared();
        let mut grad = Vector::zeros(self.inst.p());
        self.inst.gram_into(&residual, &mut ws.scratch_n, &mut grad);
        grad *= self.mu;
        let l1 = norm1(&u);
        Point {
            u,
            residual,
            grad,
            f,
            l1,
        }
    }
}

/// An iterate together with everything derived from it by Gram products.
#[derive(Debug, Clone)]
struct Point {
    u: Vector,
    /// `XᵀXu − c`
    residual: Vector,
    grad: Vector,
    f: f64,
    l1: f64,
}

impl Point {
    fn total(&self) -> f64 {
        self.f + self.l1
    }
}

struct Workspace {
    scratch_n: Vector,
}

impl Workspace {
    fn new(inst: &Instance) -> Self {
        Self {
            scratch_n: Vector::zeros(inst.n()),
        }
    }
}

/// `∇f_k(u) = μ XᵀX (XᵀXu − c)`.
pub fn grad_fk(obj: &SubproblemObjective, u: &Vector) -> Result<Vector> {
    Ok(obj.evaluate(u)?.grad)
}

fn direction_from(u: &Vector, grad: &Vector, bar_alpha: f64) -> (Vector, f64) {
    let d = Vector::from_iterator(
        u.len(),
        u.iter()
            .zip(grad.iter())
            .map(|(ui, gi)| shrink(ui - bar_alpha * gi, bar_alpha) - ui),
    );
    let mut l1_next = 0.0;
    let mut l1_now = 0.0;
    for (ui, di) in u.iter().zip(d.iter()) {
        l1_next += (ui + di).abs();
        l1_now += ui.abs();
    }
    let delta = grad.dot(&d) + l1_next - l1_now;
    (d, delta)
}

/// Search direction `d = SoftThresh(u − ᾱ∇f(u), ᾱ) − u` and the predicted
/// decrease `Δ = ∇f(u)ᵀd + ||u + d||_1 − ||u||_1` (never positive).
pub fn search_direction(
    obj: &SubproblemObjective,
    u: &Vector,
    bar_alpha: f64,
) -> Result<(Vector, f64)> {
    if !(bar_alpha > 0.0 && bar_alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "spectral step must lie in (0, 1], got {bar_alpha}"
        )));
    }
    let point = obj.evaluate(u)?;
    Ok(direction_from(&point.u, &point.grad, bar_alpha))
}

/// State of the inner method between iterations.
#[derive(Debug, Clone)]
pub struct InnerState {
    pub u: Vector,
    pub bar_alpha: f64,
    /// Objective values `f_k(u^i) + ||u^i||_1` of the last `M + 1` iterates, oldest first.
    pub objective_window: VecDeque<f64>,
    pub l: usize,
}

impl InnerState {
    pub fn new(obj: &SubproblemObjective, u0: Vector) -> Result<Self> {
        let total = obj.total(&u0)?;
        Ok(Self {
            u: u0,
            bar_alpha: 1.0,
            objective_window: VecDeque::from([total]),
            l: 0,
        })
    }

    fn window_max(&self) -> f64 {
        self.objective_window
            .iter()
            .fold(f64::NEG_INFINITY, |m, v| m.max(*v))
    }
}

fn push_window(window: &mut VecDeque<f64>, value: f64, memory: usize) {
    window.push_back(value);
    while window.len() > memory + 1 {
        window.pop_front();
    }
}

/// Largest `α ∈ {1, η, η², …}` satisfying the nonmonotone Armijo condition
/// against the state's objective window.
pub fn line_search(
    obj: &SubproblemObjective,
    state: &InnerState,
    d: &Vector,
    delta: f64,
    config: &SubsolverConfig,
) -> Result<f64> {
    check_len("line_search direction", state.u.len(), d.len())?;
    if !(delta < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "line search needs a descent measure Δ < 0, got {delta}"
        )));
    }
    let point = obj.evaluate(&state.u)?;
    let gram_d = obj.inst.apply_gram(d)?;
    backtrack(&point, d, &gram_d, delta, state.window_max(), obj.mu, config)
        .map(|(alpha, _)| alpha)
}

/// Returns the accepted step and the residual `XᵀX(u + αd) − c` there.
fn backtrack(
    point: &Point,
    d: &Vector,
    gram_d: &Vector,
    delta: f64,
    window_max: f64,
    mu: f64,
    config: &SubsolverConfig,
) -> Result<(f64, Vector)> {
    let mut alpha = 1.0;
    let mut trial_residual = point.residual.clone();
    for _ in 0..config.max_backtracks {
        trial_residual.copy_from(&point.residual);
        trial_residual.axpy(alpha, gram_d, 1.0);
        let l1 = norm1(&(&point.u + d * alpha));
        let trial = 0.5 * mu * trial_residual.norm_squared() + l1;
        if trial <= window_max + config.sigma_ls * alpha * delta {
            return Ok((alpha, trial_residual));
        }
        alpha *= config.eta;
    }
    Err(Error::LineSearchFailure(config.max_backtracks))
}

/// Safeguarded Barzilai–Borwein step `min{max{‖s‖²/sᵀg, α_lo}, 1}`.
/// Nonpositive curvature `sᵀg ≤ 0` yields 1.
pub fn bb_step(s: &Vector, g: &Vector, config: &SubsolverConfig) -> Result<f64> {
    check_len("bb_step", s.len(), g.len())?;
    let ss = s.norm_squared();
    if ss == 0.0 {
        return Err(Error::InvalidArgument("BB step needs a nonzero displacement".into()));
    }
    Ok(bb_ratio(ss, s.dot(g), config.alpha_lo))
}

fn bb_ratio(ss: f64, sg: f64, alpha_lo: f64) -> f64 {
    if sg <= 0.0 {
        return 1.0;
    }
    (ss / sg).max(alpha_lo).min(1.0)
}

fn termination_from(point: &Point) -> f64 {
    let mut sq = 0.0;
    for (u, g) in point.u.iter().zip(point.grad.iter()) {
        let t = shrink(u - g, 1.0) - u;
        sq += t * t;
    }
    sq.sqrt() / point.total().max(1.0)
}

/// `‖SoftThresh(u − ∇f(u), 1) − u‖₂ / max{f(u) + ‖u‖₁, 1}`.
pub fn inner_termination_metric(obj: &SubproblemObjective, u: &Vector) -> Result<f64> {
    Ok(termination_from(&obj.evaluate(u)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubStatus {
    /// Termination metric reached `tol_sub`.
    Converged,
    /// Predicted decrease vanished: the iterate is a minimizer to working precision.
    Stationary,
    MaxIter,
    LineSearchFailure,
    NonFinite,
}

impl SubStatus {
    pub fn is_success(self) -> bool {
        matches!(self, SubStatus::Converged | SubStatus::Stationary)
    }
}

#[derive(Debug, Clone)]
pub struct SubproblemOutcome {
    pub u: Vector,
    pub iterations: usize,
    pub status: SubStatus,
    /// `f_k(u) + ‖u‖₁` at the returned iterate.
    pub objective: f64,
}

/// Per-iteration record handed to observers.
#[derive(Debug, Clone)]
pub struct InnerStep {
    pub l: usize,
    /// Spectral step used to build this iteration's direction.
    pub bar_alpha: f64,
    pub delta: f64,
    pub alpha: f64,
    pub window_max: f64,
    pub objective_prev: f64,
    pub objective_new: f64,
    /// Spectral step computed for the next iteration.
    pub next_bar_alpha: f64,
}

/// Runs the nonmonotone gradient method from the warm start `u0`.
pub fn solve_subproblem(
    obj: &SubproblemObjective,
    u0: &Vector,
    config: &SubsolverConfig,
) -> Result<SubproblemOutcome> {
    solve_subproblem_observed(obj, u0, config, |_| {})
}

/// [`solve_subproblem`] with a callback invoked after every accepted step.
pub fn solve_subproblem_observed<F>(
    obj: &SubproblemObjective,
    u0: &Vector,
    config: &SubsolverConfig,
    mut observe: F,
) -> Result<SubproblemOutcome>
where
    F: FnMut(&InnerStep),
{
    config.validate()?;
    check_len("subproblem warm start", obj.inst.p(), u0.len())?;
    let mut ws = Workspace::new(obj.inst);
    let mut point = obj.point(u0.clone(), &mut ws);
    Ok(iterate(obj, &mut point, &mut ws, config, &mut observe))
}

fn iterate(
    obj: &SubproblemObjective,
    point: &mut Point,
    ws: &mut Workspace,
    config: &SubsolverConfig,
    observe: &mut dyn FnMut(&InnerStep),
) -> SubproblemOutcome {
    let mut window = VecDeque::with_capacity(config.memory + 1);
    window.push_back(point.total());
    let mut bar_alpha = 1.0;
    let mut best: Option<Point> = None;
    let mut gram_d = Vector::zeros(obj.inst.p());

    let mut l = 0;
    let status = loop {
        if !point.total().is_finite() {
            break SubStatus::NonFinite;
        }
        if termination_from(point) <= config.tol_sub {
            break SubStatus::Converged;
        }
        if l >= config.max_inner_iter {
            break SubStatus::MaxIter;
        }
        let (d, delta) = direction_from(&point.u, &point.grad, bar_alpha);
        if delta >= -1e-15 * point.total().max(1.0) {
            break SubStatus::Stationary;
        }
        obj.inst.gram_into(&d, &mut ws.scratch_n, &mut gram_d);
        let window_max = window.iter().fold(f64::NEG_INFINITY, |m: f64, v| m.max(*v));
        let (alpha, residual_next) = match backtrack(point, &d, &gram_d, delta, window_max, obj.mu, config) {
            Ok(found) => found,
            Err(_) => break SubStatus::LineSearchFailure,
        };

        let s = &d * alpha;
        let u_next = &point.u + &s;
        let next = obj.finish_point(u_next, residual_next, ws);

        let ss = s.norm_squared();
        let next_bar_alpha = if ss > 0.0 {
            let sg = s.dot(&next.grad) - s.dot(&point.grad);
            bb_ratio(ss, sg, config.alpha_lo)
        } else {
            bar_alpha
        };
        observe(&InnerStep {
            l,
            bar_alpha,
            delta,
            alpha,
            window_max,
            objective_prev: point.total(),
            objective_new: next.total(),
            next_bar_alpha,
        });

        let prev = std::mem::replace(point, next);
        if best.as_ref().map_or(true, |b| prev.total() < b.total()) {
            best = Some(prev);
        }
        push_window(&mut window, point.total(), config.memory);
        bar_alpha = next_bar_alpha;
        l += 1;
        if ss == 0.0 {
            break SubStatus::Stationary;
        }
    };

    // On failure hand back the lowest-objective iterate seen.
    let chosen = match (status.is_success(), best) {
        (false, Some(b)) if !(point.total() <= b.total()) => b,
        _ => point.clone(),
    };
    SubproblemOutcome {
        objective: chosen.total(),
        u: chosen.u,
        iterations: l,
        status,
    }
}

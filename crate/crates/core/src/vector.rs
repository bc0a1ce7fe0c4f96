//! Entrywise vector primitives shared by the outer and inner solvers.

use nalgebra::DVector;

use crate::error::{check_len, Error, Result};

/// Dense real vector used for β, z, λ, y and noise.
pub type Vector = DVector<f64>;

/// Entrywise `sgn(v_i) * max(0, |v_i| - gamma)`, the proximal map of `gamma * ||.||_1`.
pub fn soft_thresh(v: &Vector, gamma: f64) -> Result<Vector> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "soft-threshold level must be positive and finite, got {gamma}"
        )));
    }
    Ok(v.map(|x| shrink(x, gamma)))
}

#[inline]
pub(crate) fn shrink(x: f64, gamma: f64) -> f64 {
    let m = x.abs() - gamma;
    if m > 0.0 {
        m.copysign(x)
    } else {
        0.0
    }
}

/// Euclidean projection onto the box `|w_j| <= bound_j`.
pub fn box_clamp(w: &Vector, bound: &Vector) -> Result<Vector> {
    check_len("box_clamp", w.len(), bound.len())?;
    if let Some(b) = bound.iter().find(|b| !(**b > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "box bounds must be positive, got {b}"
        )));
    }
    Ok(w.zip_map(bound, |x, b| x.max(-b).min(b)))
}

pub fn norm1(v: &Vector) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn norm_inf(v: &Vector) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub(crate) fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

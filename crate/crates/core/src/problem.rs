//! Problem data for the Dantzig selector
//! `min ||β||_1  s.t.  ||D⁻¹Xᵀ(Xβ − y)||_∞ ≤ δ`
//! and the Gram operator `v ↦ Xᵀ(Xv)`.

use nalgebra::DMatrix;

use crate::error::{check_len, Error, Result};
use crate::vector::{all_finite, Vector};

/// Dense design matrix, `n` rows by `p` columns.
pub type DesignMatrix = DMatrix<f64>;

/// An immutable problem instance. Column norms `d` and the correlation `Xᵀy`
/// are computed once at construction.
#[derive(Debug, Clone)]
pub struct Instance {
    x: DesignMatrix,
    y: Vector,
    delta: f64,
    d: Vector,
    xty: Vector,
}

impl Instance {
    pub fn new(x: DesignMatrix, y: Vector, delta: f64) -> Result<Self> {
        check_len("instance response", x.nrows(), y.len())?;
        if x.ncols() == 0 || x.nrows() == 0 {
            return Err(Error::InvalidArgument("design matrix is empty".into()));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "delta must be positive and finite, got {delta}"
            )));
        }
        if !all_finite(x.as_slice()) {
            return Err(Error::NonFinite("design matrix"));
        }
        if !all_finite(y.as_slice()) {
            return Err(Error::NonFinite("response"));
        }
        let d = Vector::from_iterator(x.ncols(), x.column_iter().map(|c| c.norm()));
        if let Some(j) = d.iter().position(|v| *v == 0.0) {
            return Err(Error::InvalidArgument(format!("column {j} of X is zero")));
        }
        let xty = x.tr_mul(&y);
        Ok(Self {
            x,
            y,
            delta,
            d,
            xty,
        })
    }

    /// Same design and response with a different constraint level.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(self.x.clone(), self.y.clone(), delta)
    }

    pub fn x(&self) -> &DesignMatrix {
        &self.x
    }

    pub fn y(&self) -> &Vector {
        &self.y
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Column 2-norms of X (the diagonal of D).
    pub fn col_norms(&self) -> &Vector {
        &self.d
    }

    /// Cached `Xᵀy`.
    pub fn xty(&self) -> &Vector {
        &self.xty
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// `Xᵀ(Xv)` via two matrix-vector products; the Gram matrix is never formed.
    pub fn apply_gram(&self, v: &Vector) -> Result<Vector> {
        check_len("apply_gram", self.p(), v.len())?;
        let mut scratch = Vector::zeros(self.n());
        let mut out = Vector::zeros(self.p());
        self.gram_into(v, &mut scratch, &mut out);
        Ok(out)
    }

    /// Allocation-free Gram product for the solver loops. Lengths are the
    /// caller's responsibility.
    pub(crate) fn gram_into(&self, v: &Vector, scratch: &mut Vector, out: &mut Vector) {
        scratch.gemv(1.0, &self.x, v, 0.0);
        out.gemv_tr(1.0, &self.x, scratch, 0.0);
    }

    /// `‖D⁻¹w‖_∞`.
    pub(crate) fn scaled_norm_inf(&self, w: &Vector) -> f64 {
        w.iter()
            .zip(self.d.iter())
            .fold(0.0, |m, (a, b)| m.max(a.abs() / b))
    }
}

//! Independent oracles shared by the integration tests. Nothing here calls
//! into the solver paths it is used to check.
#![allow(dead_code)]

use dantzig::{DesignMatrix, Instance, Vector};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> DesignMatrix {
    DesignMatrix::from_fn(n, p, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

pub fn dense_gram(x: &DesignMatrix) -> DMatrix<f64> {
    let (n, p) = x.shape();
    DMatrix::from_fn(p, p, |i, j| (0..n).map(|k| x[(k, i)] * x[(k, j)]).sum())
}

pub fn l1(v: &Vector) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

/// Random instance with δ set to `frac` times the level at which β = 0
/// becomes feasible, so the constraint is active at the optimum.
pub fn tiny_instance(rng: &mut ChaCha8Rng, n: usize, p: usize, frac: f64) -> Instance {
    let x = gaussian_matrix(rng, n, p);
    let y = gaussian_vector(rng, n);
    let xty = x.transpose() * &y;
    let zero_level = (0..p)
        .map(|j| (xty[j] / x.column(j).norm()).abs())
        .fold(0.0, f64::max);
    Instance::new(x, y, frac * zero_level).unwrap()
}

/// Optimal value and an optimal point of a linear program over
/// `{v : lo ≤ A v ≤ hi}`, with an objective that is linear on each orthant.
#[derive(Debug, Clone)]
pub struct LpOptimum {
    pub value: f64,
    pub point: Vector,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive enumeration of basic solutions: a vertex of the feasible set
/// intersected with an orthant has some coordinates at zero and, on the
/// remaining `k` free coordinates, `k` linearly independent constraint rows
/// at one of their bounds. Every candidate is checked for feasibility and
/// scored with `objective`; the best (minimum if `minimize`) is returned.
pub fn enumerate_basic_solutions(
    a: &DMatrix<f64>,
    lo: &Vector,
    hi: &Vector,
    objective: impl Fn(&Vector) -> f64,
    minimize: bool,
) -> LpOptimum {
    let p = a.ncols();
    let rows = a.nrows();
    let scale = a.amax().max(1.0);
    let rank = a.clone().svd(false, false).rank(1e-9 * scale);
    let feas_tol = 1e-9 * (scale + hi.amax().max(lo.amax()));
    let mut best: Option<LpOptimum> = None;

    for k in 0..=rank.min(p) {
        let free_sets = combinations(p, k);
        let row_sets = combinations(rows, k);
        for free in &free_sets {
            for rs in &row_sets {
                let sub = DMatrix::from_fn(k, k, |i, j| a[(rs[i], free[j])]);
                let lu = sub.clone().lu();
                if k > 0 {
                    let det = lu.determinant().abs();
                    let norm = sub.amax().powi(k as i32);
                    if !(det > 1e-10 * norm) {
                        continue;
                    }
                }
                for sides in 0u32..(1u32 << k) {
                    let rhs = Vector::from_fn(k, |i, _| {
                        if sides & (1 << i) != 0 {
                            hi[rs[i]]
                        } else {
                            lo[rs[i]]
                        }
                    });
                    let sol = if k == 0 {
                        Vector::zeros(0)
                    } else {
                        match lu.solve(&rhs) {
                            Some(s) => s,
                            None => continue,
                        }
                    };
                    let mut v = Vector::zeros(p);
                    for (i, &j) in free.iter().enumerate() {
                        v[j] = sol[i];
                    }
                    let av = a * &v;
                    let feasible = (0..rows).all(|i| av[i] >= lo[i] - feas_tol && av[i] <= hi[i] + feas_tol);
                    if !feasible {
                        continue;
                    }
                    let value = objective(&v);
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            if minimize {
                                value < b.value
                            } else {
                                value > b.value
                            }
                        }
                    };
                    if better {
                        best = Some(LpOptimum { value, point: v });
                    }
                }
            }
        }
    }
    best.expect("feasible set has a basic solution")
}

/// `min ||β||_1  s.t.  |XᵀXβ − Xᵀy| ≤ δd`.
pub fn dantzig_primal_lp(inst: &Instance) -> LpOptimum {
    let x = inst.x();
    let a = dense_gram(x);
    let c = x.transpose() * inst.y();
    let d = Vector::from_iterator(inst.p(), x.column_iter().map(|col| col.norm()));
    let b = d * inst.delta();
    enumerate_basic_solutions(&a, &(&c - &b), &(&c + &b), l1, true)
}

/// `max −yᵀXλ − δ Σ d_j|λ_j|  s.t.  |XᵀXλ| ≤ 1`.
pub fn dantzig_dual_lp(inst: &Instance) -> LpOptimum {
    let x = inst.x();
    let a = dense_gram(x);
    let c = x.transpose() * inst.y();
    let d = Vector::from_iterator(inst.p(), x.column_iter().map(|col| col.norm()));
    let delta = inst.delta();
    let p = inst.p();
    let obj = move |l: &Vector| -c.dot(l) - delta * (0..p).map(|j| d[j] * l[j].abs()).sum::<f64>();
    enumerate_basic_solutions(&a, &Vector::from_element(p, -1.0), &Vector::from_element(p, 1.0), obj, false)
}

/// Dense data of the β-subproblem `(μ/2)||A u − c||² + ||u||_1`.
pub struct DenseSubproblem {
    pub a: DMatrix<f64>,
    pub c: Vector,
    pub mu: f64,
}

impl DenseSubproblem {
    pub fn new(inst: &Instance, z: &Vector, lambda: &Vector, mu: f64) -> Self {
        let x = inst.x();
        let a = dense_gram(x);
        let c = x.transpose() * inst.y() + z - lambda / mu;
        Self { a, c, mu }
    }

    pub fn smooth(&self, u: &Vector) -> f64 {
        0.5 * self.mu * (&self.a * u - &self.c).norm_squared()
    }

    pub fn total(&self, u: &Vector) -> f64 {
        self.smooth(u) + l1(u)
    }

    pub fn gradient(&self, u: &Vector) -> Vector {
        &self.a * (&self.a * u - &self.c) * self.mu
    }

    /// Lipschitz constant of the gradient, `μ λ_max(A)²`.
    pub fn lipschitz(&self) -> f64 {
        let eig = self.a.clone().symmetric_eigen();
        let m = eig.eigenvalues.amax();
        self.mu * m * m
    }

    /// Monotone FISTA (Beck–Teboulle) with constant step `1/L`.
    pub fn reference_solution(&self, u0: &Vector, iterations: usize) -> Vector {
        let step = 1.0 / self.lipschitz();
        let shrink = |v: f64, g: f64| {
            let m = v.abs() - g;
            if m > 0.0 {
                m.copysign(v)
            } else {
                0.0
            }
        };
        let mut x = u0.clone();
        let mut fx = self.total(&x);
        let mut yk = x.clone();
        let mut t = 1.0f64;
        for _ in 0..iterations {
            let g = self.gradient(&yk);
            let zk = (&yk - g * step).map(|v| shrink(v, step));
            let fz = self.total(&zk);
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let x_prev = x.clone();
            if fz <= fx {
                x = zk.clone();
                fx = fz;
            }
            yk = &x + (&zk - &x) * (t / t_next) + (&x - &x_prev) * ((t - 1.0) / t_next);
            t = t_next;
        }
        x
    }
}

/// Central difference of `f` at `u` along `v`.
pub fn central_difference(f: impl Fn(&Vector) -> f64, u: &Vector, v: &Vector, h: f64) -> f64 {
    (f(&(u + v * h)) - f(&(u - v * h))) / (2.0 * h)
}

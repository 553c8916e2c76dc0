//! Small dense primal-dual interior-point solver for
//!
//! ```text
//! (P)  min ⟨C, X⟩  s.t. ⟨A_k, X⟩ = b_k,  X ⪰ 0
//! (D)  max b·y     s.t. S = C − Σ y_k A_k ⪰ 0
//! ```
//!
//! using the HKM search direction with Mehrotra predictor-corrector steps.
//! Constraint matrices are sparse and symmetric; the Schur complement is dense.
//! Everything runs sequentially, so results are bit-for-bit reproducible.

use faer::linalg::solvers::DenseSolveCore;
use faer::prelude::*;
use faer::Side;

/// Symmetric sparse matrix given by its upper-triangle entries `(i, j, v)`
/// with `i ≤ j`; off-diagonal entries stand for both `(i, j)` and `(j, i)`.
#[derive(Debug, Clone)]
pub struct SymSparse {
    /// Expanded to ordered pairs.
    ordered: Vec<(usize, usize, f64)>,
}

impl SymSparse {
    pub fn new(upper: &[(usize, usize, f64)]) -> Self {
        let mut ordered = Vec::with_capacity(2 * upper.len());
        for &(i, j, v) in upper {
            debug_assert!(i <= j);
            ordered.push((i, j, v));
            if i != j {
                ordered.push((j, i, v));
            }
        }
        Self { ordered }
    }

    /// `⟨A, M⟩ = tr(A M)`; valid for nonsymmetric `M` as well.
    fn dot(&self, m: &Mat<f64>) -> f64 {
        self.ordered.iter().map(|&(a, b, v)| v * m[(a, b)]).sum()
    }

    fn add_scaled_to(&self, out: &mut Mat<f64>, s: f64) {
        for &(a, b, v) in &self.ordered {
            out[(a, b)] += s * v;
        }
    }
}

pub struct Problem {
    pub c: Mat<f64>,
    pub a: Vec<SymSparse>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Iterate {
    pub x: Mat<f64>,
    pub y: Vec<f64>,
    pub s: Mat<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stop {
    /// The monitor asked to stop.
    Accepted,
    IterationLimit,
    /// A factorisation failed; the last iterate is the best available.
    NumericalBreakdown,
}

fn sym(m: &Mat<f64>) -> Mat<f64> {
    let n = m.nrows();
    Mat::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

fn inner(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            acc += a[(i, j)] * b[(i, j)];
        }
    }
    acc
}

/// Largest `α` keeping `X + α dX ⪰ 0`, from the smallest eigenvalue of
/// `L⁻¹ dX L⁻ᵀ` where `X = L Lᵀ`. Infinite when no eigenvalue is negative.
fn max_step(x: &Mat<f64>, dx: &Mat<f64>) -> Option<f64> {
    let llt = x.llt(Side::Lower).ok()?;
    let l = llt.L();
    let mut t = dx.clone();
    l.solve_lower_triangular_in_place(t.as_mut());
    let mut t = t.transpose().to_owned();
    l.solve_lower_triangular_in_place(t.as_mut());
    let lmin = sym(&t).self_adjoint_eigenvalues(Side::Lower).ok()?[0];
    Some(if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    })
}

impl Problem {
    fn op(&self, m: &Mat<f64>) -> Vec<f64> {
        self.a.iter().map(|a| a.dot(m)).collect()
    }

    fn adjoint(&self, y: &[f64]) -> Mat<f64> {
        let n = self.c.nrows();
        let mut out = Mat::zeros(n, n);
        for (a, &yk) in self.a.iter().zip(y) {
            if yk != 0.0 {
                a.add_scaled_to(&mut out, yk);
            }
        }
        out
    }

    /// `M_kl = tr(A_k X A_l Z)`, symmetric positive definite for `X, Z ≻ 0`.
    fn schur(&self, x: &Mat<f64>, z: &Mat<f64>) -> Mat<f64> {
        let m = self.a.len();
        let mut out = Mat::<f64>::zeros(m, m);
        for k in 0..m {
            for l in k..m {
                let mut acc = 0.0;
                for &(a, b, v) in &self.a[k].ordered {
                    for &(c, d, u) in &self.a[l].ordered {
                        acc += v * u * x[(b, c)] * z[(d, a)];
                    }
                }
                out[(k, l)] = acc;
                out[(l, k)] = acc;
            }
        }
        out
    }

    /// Runs the interior-point method from `start`. After every iteration
    /// (and once before the first) `monitor` sees the current iterate and
    /// returns `true` to stop. Returns the final iterate, the number of
    /// completed iterations, and why the loop ended.
    pub fn solve(
        &self,
        start: Iterate,
        max_iterations: usize,
        mut monitor: impl FnMut(&Iterate) -> bool,
    ) -> (Iterate, usize, Stop) {
        let n = self.c.nrows() as f64;
        let mut it = start;
        if monitor(&it) {
            return (it, 0, Stop::Accepted);
        }
        for iter in 1..=max_iterations {
            let Some(step) = self.step(&it, n) else {
                return (it, iter - 1, Stop::NumericalBreakdown);
            };
            it = step;
            if monitor(&it) {
                return (it, iter, Stop::Accepted);
            }
        }
        (it, max_iterations, Stop::IterationLimit)
    }

    fn step(&self, it: &Iterate, n: f64) -> Option<Iterate> {
        let Iterate { x, y, s } = it;
        let z = s.llt(Side::Lower).ok()?.inverse();
        let z = sym(&z);
        let mu = inner(x, s) / n;
        let ax = self.op(x);
        let rp: Vec<f64> = self.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let rd = &self.c - self.adjoint(y) - s;
        let schur = self.schur(x, &z);
        let chol = schur.llt(Side::Lower).ok()?;
        let x_rd_z = x * &rd * &z;

        let direction = |sigma_mu: f64, second_order: Option<&Mat<f64>>| {
            let mut g = &z * Scale(sigma_mu) - x - &x_rd_z;
            if let Some(so) = second_order {
                g -= so;
            }
            let ag = self.op(&g);
            let rhs = Col::<f64>::from_fn(rp.len(), |k| rp[k] - ag[k]);
            let dy_col = chol.solve(&rhs);
            let dy: Vec<f64> = (0..rp.len()).map(|k| dy_col[k]).collect();
            let ds = &rd - self.adjoint(&dy);
            let mut dx = &z * Scale(sigma_mu) - x - sym(&(x * &ds * &z));
            if let Some(so) = second_order {
                dx -= sym(so);
            }
            (dx, dy, ds)
        };

        let (dx_a, _dy_a, ds_a) = direction(0.0, None);
        let ap = max_step(x, &dx_a)?.min(1.0);
        let ad = max_step(s, &ds_a)?.min(1.0);
        let mu_aff = inner(&(x + &dx_a * Scale(ap)), &(s + &ds_a * Scale(ad))) / n;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        let gamma = 0.9 + 0.09 * ap.min(ad);

        let second = &dx_a * &ds_a * &z;
        let (dx, dy, ds) = direction(sigma * mu, Some(&second));
        let ap = (gamma * max_step(x, &dx)?).min(1.0);
        let ad = (gamma * max_step(s, &ds)?).min(1.0);

        let x = sym(&(x + &dx * Scale(ap)));
        let s = sym(&(s + &ds * Scale(ad)));
        let y = y.iter().zip(&dy).map(|(y, d)| y + ad * d).collect();
        Some(Iterate { x, y, s })
    }
}

//! Weighted Lovász number with certified two-sided bounds.
//!
//! ϑ(G) = max ⟨W, X⟩ over X ⪰ 0, tr X = 1, X_ij = 0 on edges, with
//! W_ij = √(w_i w_j). Any X feasible for that program gives a lower bound, and
//! for any symmetric M agreeing with W off the edge set, λ_max(M) is an upper
//! bound. The interior-point iterates are turned into such pairs at every
//! step, and the best pair seen is reported.

mod sdp;

use crate::graph::Graph;
use crate::rational;
use faer::prelude::*;
use faer::Side;
use sdp::{Iterate, Problem, Stop, SymSparse};

pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ThetaError {
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("closed form needs an odd cycle length of at least 3, got {0}")]
    NotOddCycle(usize),
    #[error("cycle length must be at least 3, got {0}")]
    CycleTooShort(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaResult {
    /// Midpoint of the certified interval.
    pub value: f64,
    pub low: f64,
    pub high: f64,
    /// Feasible matrix attaining `low` (up to rounding): unit trace, exact
    /// zeros on edges, positive semidefinite.
    pub primal_matrix: Vec<Vec<f64>>,
    /// Entries `(i, j, m_ij)` on the edges of a matrix `M` that equals `W` off
    /// the edges and has `λ_max(M) ≤ high`.
    pub dual_certificate: Vec<(usize, usize, f64)>,
    pub iterations: usize,
    /// `high − low ≤ tol` was reached.
    pub converged: bool,
}

impl ThetaResult {
    pub fn width(&self) -> f64 {
        self.high - self.low
    }

    fn exact(value: f64, primal_matrix: Vec<Vec<f64>>) -> Self {
        Self {
            value,
            low: value,
            high: value,
            primal_matrix,
            dual_certificate: Vec::new(),
            iterations: 0,
            converged: true,
        }
    }
}

/// Default certified width by graph size.
pub fn default_tolerance(n: usize) -> f64 {
    match n {
        0..=50 => 1e-6,
        51..=200 => 1e-4,
        _ => 1e-3,
    }
}

/// n·cos(π/n) / (1 + cos(π/n)), the Lovász number of the odd cycle C_n.
pub fn theta_odd_cycle(n: usize) -> Result<f64, ThetaError> {
    if n < 3 || n % 2 == 0 {
        return Err(ThetaError::NotOddCycle(n));
    }
    let c = (std::f64::consts::PI / n as f64).cos();
    Ok(n as f64 * c / (1.0 + c))
}

/// Quantum bound of the n-cycle Bell inequality: 2n·cos(π/n)/(cos(π/n)+1)
/// for odd n, n·(cos(π/n)+1)/2 for even n.
pub fn ncycle_quantum_bound(n: usize) -> Result<f64, ThetaError> {
    if n < 3 {
        return Err(ThetaError::CycleTooShort(n));
    }
    let c = (std::f64::consts::PI / n as f64).cos();
    let nf = n as f64;
    Ok(if n % 2 == 1 {
        2.0 * nf * c / (c + 1.0)
    } else {
        nf * (c + 1.0) / 2.0
    })
}

struct Certifier<'g> {
    g: &'g Graph,
    sqrt_w: Vec<f64>,
    w_norm: f64,
    edges: Vec<(usize, usize)>,
}

fn frobenius(m: &Mat<f64>) -> f64 {
    let n = m.nrows();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)] * m[(i, j)])
        .sum::<f64>()
        .sqrt()
}

/// Slack for accumulated floating point error in an `n×n` eigenvalue or
/// inner-product computation at magnitude `scale`.
fn rounding_margin(n: usize, scale: f64) -> f64 {
    32.0 * n as f64 * f64::EPSILON * scale.max(1.0)
}

impl<'g> Certifier<'g> {
    fn new(g: &'g Graph) -> Self {
        let sqrt_w: Vec<f64> = g
            .weights()
            .iter()
            .map(|w| rational::to_f64(w).sqrt())
            .collect();
        let w_norm = sqrt_w.iter().map(|s| s * s).sum();
        Self {
            g,
            sqrt_w,
            w_norm,
            edges: g.edges(),
        }
    }

    fn n(&self) -> usize {
        self.sqrt_w.len()
    }

    fn w(&self, i: usize, j: usize) -> f64 {
        self.sqrt_w[i] * self.sqrt_w[j]
    }

    fn w_matrix(&self) -> Mat<f64> {
        Mat::from_fn(self.n(), self.n(), |i, j| self.w(i, j))
    }

    /// `λ_max` of W with the given values substituted on the edges.
    fn upper(&self, edge_values: &[f64]) -> f64 {
        let mut m = self.w_matrix();
        for (&(i, j), &v) in self.edges.iter().zip(edge_values) {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        let Ok(eig) = m.self_adjoint_eigenvalues(Side::Lower) else {
            return f64::INFINITY;
        };
        eig[eig.len() - 1] + rounding_margin(self.n(), frobenius(&m))
    }

    /// Projects an approximate primal matrix onto the feasible set (zero the
    /// edges, shift into the PSD cone, rescale the trace) and evaluates it.
    fn lower(&self, x: &Mat<f64>) -> Option<(f64, Mat<f64>)> {
        let n = self.n();
        let mut p = Mat::from_fn(n, n, |i, j| 0.5 * (x[(i, j)] + x[(j, i)]));
        for &(i, j) in &self.edges {
            p[(i, j)] = 0.0;
            p[(j, i)] = 0.0;
        }
        let lmin = p.self_adjoint_eigenvalues(Side::Lower).ok()?[0];
        if lmin < 0.0 {
            for i in 0..n {
                p[(i, i)] -= lmin;
            }
        }
        let trace: f64 = (0..n).map(|i| p[(i, i)]).sum();
        if !(trace.is_finite() && trace > 0.0) {
            return None;
        }
        let p = Mat::from_fn(n, n, |i, j| p[(i, j)] / trace);
        let mut value = 0.0;
        for j in 0..n {
            for i in 0..n {
                value += self.w(i, j) * p[(i, j)];
            }
        }
        Some((value - rounding_margin(n, self.w_norm), p))
    }
}

/// Upper bound on ϑ(G) implied by a dual certificate, recomputed from scratch.
pub fn certificate_upper_bound(g: &Graph, certificate: &[(usize, usize, f64)]) -> f64 {
    let c = Certifier::new(g);
    let mut values = vec![0.0; c.edges.len()];
    for &(i, j, v) in certificate {
        let (i, j) = (i.min(j), i.max(j));
        if let Ok(k) = c.edges.binary_search(&(i, j)) {
            values[k] = v;
        }
    }
    // Edges the certificate leaves out default to zero, which is still a
    // valid choice of free entries.
    c.upper(&values)
}

struct Best {
    low: f64,
    primal: Option<Mat<f64>>,
    high: f64,
    certificate: Vec<f64>,
}

/// Computes ϑ(G) to a certified absolute width `tol`. If the width is not
/// reached the best interval found is returned with `converged` unset.
pub fn lovasz_theta(g: &Graph, tol: f64) -> Result<ThetaResult, ThetaError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(ThetaError::InvalidTolerance(tol));
    }
    let n = g.vertex_count();
    match n {
        0 => return Ok(ThetaResult::exact(0.0, Vec::new())),
        1 => {
            return Ok(ThetaResult::exact(
                rational::to_f64(g.weight(0)),
                vec![vec![1.0]],
            ))
        }
        _ => {}
    }
    let cert = Certifier::new(g);
    let edge_form_size = g.edge_count() + 1;
    let non_edge_form_size = n - 1 + g.non_edges().len();
    let mut best = Best {
        low: f64::NEG_INFINITY,
        primal: None,
        high: f64::INFINITY,
        certificate: Vec::new(),
    };
    let mut consider = |low: Option<(f64, Mat<f64>)>, edge_values: Vec<f64>| {
        if let Some((v, p)) = low {
            if v > best.low {
                best.low = v;
                best.primal = Some(p);
            }
        }
        let high = cert.upper(&edge_values);
        if high < best.high {
            best.high = high;
            best.certificate = edge_values;
        }
        best.high - best.low <= tol
    };

    let (_, iterations, _stop): (Iterate, usize, Stop) = if edge_form_size <= non_edge_form_size {
        let (problem, start) = edge_form(&cert);
        problem.solve(start, MAX_ITERATIONS, |it| {
            let values = cert
                .edges
                .iter()
                .enumerate()
                .map(|(k, &(i, j))| cert.w(i, j) + 0.5 * it.y[k + 1])
                .collect();
            consider(cert.lower(&it.x), values)
        })
    } else {
        let (problem, start) = non_edge_form(&cert);
        problem.solve(start, MAX_ITERATIONS, |it| {
            let values = cert.edges.iter().map(|&(i, j)| -it.x[(i, j)]).collect();
            consider(cert.lower(&it.s), values)
        })
    };

    let primal = best
        .primal
        .expect("the starting point always yields a feasible primal matrix");
    let (low, high) = (best.low, best.high.max(best.low));
    let dual_certificate = cert
        .edges
        .iter()
        .zip(&best.certificate)
        .map(|(&(i, j), &v)| (i, j, v))
        .collect();
    Ok(ThetaResult {
        value: 0.5 * (low + high),
        low,
        high,
        primal_matrix: (0..n)
            .map(|i| (0..n).map(|j| primal[(i, j)]).collect())
            .collect(),
        dual_certificate,
        iterations,
        converged: high - low <= tol,
    })
}

/// `min −⟨W, X⟩` with `tr X = 1` and one constraint `X_ij = 0` per edge.
fn edge_form(c: &Certifier) -> (Problem, Iterate) {
    let n = c.n();
    let mut a = vec![SymSparse::new(
        &(0..n).map(|i| (i, i, 1.0)).collect::<Vec<_>>(),
    )];
    let mut b = vec![1.0];
    for &(i, j) in &c.edges {
        a.push(SymSparse::new(&[(i, j, 0.5)]));
        b.push(0.0);
    }
    let w = c.w_matrix();
    let shift = c.w_norm + 1.0;
    let mut y = vec![0.0; b.len()];
    y[0] = -shift;
    let start = Iterate {
        x: Mat::from_fn(n, n, |i, j| if i == j { 1.0 / n as f64 } else { 0.0 }),
        y,
        s: Mat::from_fn(n, n, |i, j| if i == j { shift } else { 0.0 }) - &w,
    };
    (Problem { c: -&w, a, b }, start)
}

/// The dual side written over `Y = tI − W − Z` with `Z` supported on edges:
/// minimise `(tr Y + Σw)/n` subject to equal `Y_ii + w_i` and `Y_ij = −W_ij`
/// on non-edges. Its dual slack, normalised, is a primal matrix for ϑ.
fn non_edge_form(c: &Certifier) -> (Problem, Iterate) {
    let n = c.n();
    let w0 = c.sqrt_w[0] * c.sqrt_w[0];
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 1..n {
        a.push(SymSparse::new(&[(0, 0, 1.0), (i, i, -1.0)]));
        b.push(c.sqrt_w[i] * c.sqrt_w[i] - w0);
    }
    for (i, j) in c.g.non_edges() {
        a.push(SymSparse::new(&[(i, j, 0.5)]));
        b.push(-c.w(i, j));
    }
    let identity_over_n = Mat::from_fn(n, n, |i, j| if i == j { 1.0 / n as f64 } else { 0.0 });
    let shift = c.w_norm + 1.0;
    let start = Iterate {
        x: Mat::from_fn(n, n, |i, j| if i == j { shift } else { 0.0 }) - c.w_matrix(),
        y: vec![0.0; b.len()],
        s: identity_over_n.clone(),
    };
    (
        Problem {
            c: identity_over_n,
            a,
            b,
        },
        start,
    )
}

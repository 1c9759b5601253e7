//! Empirical log-likelihood ratio for the mean via its Lagrange dual.
//!
//! For `theta` in the interior of the hull the ratio is
//! `l(theta) = 2 * sum_i log(1 + lambda^T (X_i - theta))`, where `lambda`
//! maximizes the concave dual `G(lambda) = sum_i log(1 + lambda^T (X_i - theta))`
//! over `{lambda : 1 + lambda^T (X_i - theta) > 0}`. Outside the interior the
//! statistic is the [`LogLik::Infinite`] sentinel.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{EelError, Result};
use crate::hull::hull_contains;
use crate::sample::Sample;

const DECREMENT_TOL: f64 = 1e-18;

/// Value of a log-likelihood ratio statistic, with an explicit sentinel for
/// parameters outside the hull interior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LogLik {
    Finite(f64),
    Infinite,
}

impl LogLik {
    pub fn is_finite(&self) -> bool {
        matches!(self, LogLik::Finite(_))
    }

    /// The finite value, or `None` for the sentinel.
    pub fn finite(&self) -> Option<f64> {
        match *self {
            LogLik::Finite(v) => Some(v),
            LogLik::Infinite => None,
        }
    }

    /// Whether the statistic is at most `critical`; the sentinel never is.
    pub fn at_most(&self, critical: f64) -> bool {
        matches!(*self, LogLik::Finite(v) if v <= critical)
    }

    /// Whether the statistic is at least `level`; the sentinel always is.
    pub fn at_least(&self, level: f64) -> bool {
        match *self {
            LogLik::Finite(v) => v >= level,
            LogLik::Infinite => true,
        }
    }

    /// Multiplies a finite value by `factor`; the sentinel is unchanged.
    pub fn scaled(self, factor: f64) -> LogLik {
        match self {
            LogLik::Finite(v) => LogLik::Finite(v * factor),
            LogLik::Infinite => LogLik::Infinite,
        }
    }
}

/// Result of solving the dual problem at one parameter value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElEvaluation {
    /// Lagrange multiplier in the original coordinates.
    pub lambda: Vec<f64>,
    /// `l(theta)`, always finite and nonnegative here.
    pub loglik: f64,
    /// Optimal multinomial weights `1 / (n (1 + lambda^T (X_i - theta)))`.
    pub weights: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Dual gradient norm at the returned multiplier, measured with each
    /// coordinate of `X_i - theta` scaled to unit maximum magnitude.
    pub grad_norm: f64,
}

impl ElEvaluation {
    /// Empirical likelihood ratio `R(theta) = exp(-l / 2)`.
    pub fn ratio(&self) -> f64 {
        (-0.5 * self.loglik).exp()
    }
}

/// Stopping rules for the dual Newton iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Convergence when `|grad G| <= grad_tol * (1 + |lambda|)` in scaled coordinates.
    pub grad_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iter: 100, grad_tol: 1e-10 }
    }
}

/// Solves the dual at `theta`, which must lie in the open hull interior.
///
/// ```
/// use eelkit::{solve_lambda, Sample};
///
/// let s = Sample::univariate(&[-1.0, 2.0]).unwrap();
/// let ev = solve_lambda(&s, &[0.0]).unwrap();
/// assert!((ev.lambda[0] - 0.25).abs() < 1e-12);
/// assert!((ev.loglik - 2.0 * 1.125_f64.ln()).abs() < 1e-12);
/// ```
pub fn solve_lambda(sample: &Sample, theta: &[f64]) -> Result<ElEvaluation> {
    solve_lambda_with(sample, theta, &SolverOptions::default())
}

pub fn solve_lambda_with(sample: &Sample, theta: &[f64], opts: &SolverOptions) -> Result<ElEvaluation> {
    sample.check_point(theta)?;
    sample.require_full_rank()?;
    if !hull_contains(sample, theta)? {
        return Err(EelError::OutsideHull);
    }
    newton_dual(sample, theta, opts)
}

/// Original empirical log-likelihood ratio `l(theta)`.
///
/// ```
/// use eelkit::{oel_loglik, LogLik, Sample};
///
/// let s = Sample::univariate(&[-1.0, 2.0]).unwrap();
/// assert_eq!(oel_loglik(&s, &[0.5]).unwrap(), LogLik::Finite(0.0));
/// assert_eq!(oel_loglik(&s, &[3.0]).unwrap(), LogLik::Infinite);
/// ```
pub fn oel_loglik(sample: &Sample, theta: &[f64]) -> Result<LogLik> {
    sample.check_point(theta)?;
    sample.require_full_rank()?;
    if !hull_contains(sample, theta)? {
        return Ok(LogLik::Infinite);
    }
    match newton_dual(sample, theta, &SolverOptions::default()) {
        Ok(ev) => Ok(LogLik::Finite(ev.loglik)),
        Err(EelError::OutsideHull) => Ok(LogLik::Infinite),
        Err(e) => Err(e),
    }
}

/// Dual objective `G(lambda) = sum_i log(1 + lambda^T (X_i - theta))`;
/// `None` when `lambda` is infeasible.
pub fn dual_objective(sample: &Sample, theta: &[f64], lambda: &[f64]) -> Option<f64> {
    let mut total = 0.0;
    for x in sample.rows() {
        let t = 1.0 + x.iter().zip(theta).zip(lambda).map(|((xi, ti), li)| li * (xi - ti)).sum::<f64>();
        if t <= 0.0 {
            return None;
        }
        total += t.ln();
    }
    Some(total)
}

/// Damped Newton ascent on the dual, started at `lambda = 0`.
///
/// Works on `z_i = D (X_i - theta)` with `D` diagonal so that each coordinate
/// has unit maximum magnitude; `lambda^T z` is invariant under this change.
fn newton_dual(sample: &Sample, theta: &[f64], opts: &SolverOptions) -> Result<ElEvaluation> {
    let (n, d) = (sample.n(), sample.dim());
    let mut scale = vec![0.0_f64; d];
    for x in sample.rows() {
        for j in 0..d {
            scale[j] = scale[j].max((x[j] - theta[j]).abs());
        }
    }
    for s in &mut scale {
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    let z: Vec<f64> = sample
        .rows()
        .flat_map(|x| (0..d).map(move |j| x[j] - theta[j]))
        .enumerate()
        .map(|(idx, v)| v / scale[idx % d])
        .collect();

    let floor = 1.0 / (10.0 * n as f64);
    let mut lambda = vec![0.0; d];
    let mut t = vec![1.0; n];
    let mut iterations = 0;
    let mut converged = false;
    let mut polish = 0;
    let mut grad_norm;

    loop {
        let (grad, hess) = grad_hess(&z, &t, d);
        grad_norm = grad.norm();
        let lam_norm = lambda.iter().map(|v| v * v).sum::<f64>().sqrt();
        let step = match hess.cholesky() {
            Some(ch) => ch.solve(&grad),
            None => grad.clone(),
        };
        // Squared Newton decrement; twice the remaining gap in G to second order.
        let slope = grad.dot(&step);
        // Near the boundary lambda is large, so a small gradient alone does
        // not mean the objective has converged. Require the decrement too.
        if grad_norm <= opts.grad_tol * (1.0 + lam_norm) && slope <= DECREMENT_TOL {
            converged = true;
        }
        // Keep polishing until lambda^T grad (n times the weight-sum defect)
        // reaches roundoff.
        if converged && (grad_norm * (1.0 + lam_norm) <= 1e-12 * n as f64 || polish >= 3) {
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        if !lam_norm.is_finite() || lam_norm > 1e15 {
            return Err(EelError::OutsideHull);
        }
        if converged {
            polish += 1;
        }
        iterations += 1;

        let g0: f64 = t.iter().map(|v| v.ln()).sum();
        // In the quadratic regime the objective change drowns in roundoff,
        // so a step is judged by the gradient instead.
        let endgame = slope <= 1e-8 * (1.0 + g0.abs());

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..80 {
            let cand: Vec<f64> = lambda.iter().zip(step.iter()).map(|(l, s)| l + alpha * s).collect();
            let tc: Vec<f64> = z.chunks_exact(d).map(|zi| 1.0 + dot(&cand, zi)).collect();
            let tmin = tc.iter().cloned().fold(f64::INFINITY, f64::min);
            if tmin >= floor {
                let g1: f64 = tc.iter().map(|v| v.ln()).sum();
                let ok = g1 >= g0 + 1e-4 * alpha * slope || (endgame && grad_hess(&z, &tc, d).0.norm() < grad_norm);
                if ok {
                    accepted = Some((cand, tc));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((cand, tc)) => {
                lambda = cand;
                t = tc;
            }
            // No ascent possible from here: either we are at the optimum up
            // to roundoff, or the iteration has stalled.
            None => break,
        }
    }

    if !converged {
        return Err(EelError::NoConvergence { what: "dual Newton solver", iterations });
    }

    let loglik = 2.0 * t.iter().map(|v| v.ln()).sum::<f64>();
    let weights = t.iter().map(|v| 1.0 / (n as f64 * v)).collect();
    let lambda_orig = lambda.iter().zip(&scale).map(|(l, s)| l / s).collect();
    Ok(ElEvaluation { lambda: lambda_orig, loglik: loglik.max(0.0), weights, converged, iterations, grad_norm })
}

fn grad_hess(z: &[f64], t: &[f64], d: usize) -> (DVector<f64>, DMatrix<f64>) {
    let mut grad = DVector::zeros(d);
    let mut hess = DMatrix::zeros(d, d);
    for (zi, &ti) in z.chunks_exact(d).zip(t) {
        let inv = 1.0 / ti;
        let inv2 = inv * inv;
        for a in 0..d {
            grad[a] += zi[a] * inv;
            for b in 0..=a {
                hess[(a, b)] += zi[a] * zi[b] * inv2;
            }
        }
    }
    for a in 0..d {
        for b in 0..a {
            hess[(b, a)] = hess[(a, b)];
        }
    }
    (grad, hess)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

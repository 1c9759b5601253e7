//! Chi-square distribution function and quantiles for calibration.

use statrs::function::gamma::{gamma_lr, ln_gamma};

use crate::error::{EelError, Result};

/// `P(chi2_d <= x)`.
pub fn chisq_cdf(d: usize, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x.is_infinite() {
        1.0
    } else {
        gamma_lr(d as f64 / 2.0, x / 2.0)
    }
}

fn chisq_pdf(d: usize, x: f64) -> f64 {
    let k = d as f64 / 2.0;
    ((k - 1.0) * x.ln() - x / 2.0 - k * std::f64::consts::LN_2 - ln_gamma(k)).exp()
}

/// The `p` quantile of the chi-square distribution with `d` degrees of freedom.
///
/// ```
/// let c = eelkit::chisq_quantile(2, 0.95).unwrap();
/// assert!((c + 2.0 * 0.05_f64.ln()).abs() < 1e-9);
/// ```
pub fn chisq_quantile(d: usize, p: f64) -> Result<f64> {
    if d == 0 {
        return Err(EelError::DomainError("degrees of freedom must be at least 1".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(EelError::DomainError(format!("probability must lie in (0, 1), got {p}")));
    }
    let k = d as f64;
    // Wilson-Hilferty start.
    let z = standard_normal_quantile(p);
    let h = 2.0 / (9.0 * k);
    let mut x = (k * (1.0 - h + z * h.sqrt()).powi(3)).max(1e-3 * k);

    // Safeguarded Newton: the bracket [lo, hi] always holds the root.
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..200 {
        let f = chisq_cdf(d, x) - p;
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let step = f / chisq_pdf(d, x);
        let mut next = x - step;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if hi.is_finite() { 0.5 * (lo + hi) } else { 2.0 * x.max(1.0) };
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Acklam's rational approximation; only used as a starting value.
fn standard_normal_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.38357751867269e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] =
        [-5.447609879822406e1, 1.615858368580409e2, -1.556989798598866e2, 6.680131188771972e1, -1.328068155288572e1];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996, 3.754408661907416];
    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < 0.02425 {
        tail((-2.0 * p.ln()).sqrt())
    } else if p > 1.0 - 0.02425 {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

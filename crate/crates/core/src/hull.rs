//! Membership in the open interior of the convex hull of a sample.
//!
//! The empirical likelihood ratio is finite exactly on this interior, so the
//! predicate here is what separates a finite statistic from the infinite
//! sentinel.

use crate::error::Result;
use crate::sample::Sample;
use crate::simplex::{self, LpOutcome};

/// A point counts as interior when some feasible weight vector has every
/// weight above this margin.
pub const HULL_MARGIN_TOL: f64 = 1e-12;

/// Largest achievable minimum weight over representations of `theta` as a
/// convex combination of the observations.
///
/// Solves `max eps` subject to `sum w_i (X_i - theta) = 0`, `sum w_i = 1`,
/// `w_i >= eps >= 0`. Returns `None` when `theta` is outside the closed hull.
/// The margin is positive exactly on the open interior and at most `1/n`
/// (attained at the sample mean).
pub fn hull_margin(sample: &Sample, theta: &[f64]) -> Result<Option<f64>> {
    sample.check_point(theta)?;
    sample.require_full_rank()?;

    let (n, d) = (sample.n(), sample.dim());
    let scales = row_scales(sample, theta);
    // Columns: v_1..v_n (w_i = eps + v_i), then eps.
    let k = n + 1;
    let mut a = vec![0.0; (d + 1) * k];
    for (i, x) in sample.rows().enumerate() {
        for j in 0..d {
            let z = (x[j] - theta[j]) / scales[j];
            a[j * k + i] = z;
            a[j * k + n] += z;
        }
        a[d * k + i] = 1.0;
    }
    a[d * k + n] = n as f64;
    let mut b = vec![0.0; d + 1];
    b[d] = 1.0;
    let mut c = vec![0.0; k];
    c[n] = 1.0;

    Ok(match simplex::maximize(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => Some(value),
        LpOutcome::Infeasible => None,
        // eps <= 1/n always holds, so this cannot occur.
        LpOutcome::Unbounded => unreachable!("hull margin LP is bounded"),
    })
}

/// Whether `theta` lies in the open interior of the convex hull of the rows.
///
/// ```
/// use eelkit::{hull_contains, Sample};
///
/// let s = Sample::univariate(&[-1.0, 2.0]).unwrap();
/// assert!(hull_contains(&s, &[0.0]).unwrap());
/// assert!(!hull_contains(&s, &[2.0]).unwrap()); // boundary point
/// assert!(!hull_contains(&s, &[3.0]).unwrap());
/// ```
pub fn hull_contains(sample: &Sample, theta: &[f64]) -> Result<bool> {
    Ok(matches!(hull_margin(sample, theta)?, Some(eps) if eps > HULL_MARGIN_TOL))
}

/// Distance from the sample mean to the hull boundary along `direction`.
///
/// `direction` need not be normalized; the distance is measured in units of
/// its length.
pub fn ray_exit_distance(sample: &Sample, direction: &[f64]) -> Result<f64> {
    sample.check_point(direction)?;
    sample.require_full_rank()?;

    let (n, d) = (sample.n(), sample.dim());
    let center = sample.mean();
    let scales = row_scales(sample, center);
    // Columns: w_1..w_n, then t.  sum w_i (X_i - mean) - t u = 0, sum w = 1.
    let k = n + 1;
    let mut a = vec![0.0; (d + 1) * k];
    for (i, x) in sample.rows().enumerate() {
        for j in 0..d {
            a[j * k + i] = (x[j] - center[j]) / scales[j];
        }
        a[d * k + i] = 1.0;
    }
    for j in 0..d {
        a[j * k + n] = -direction[j] / scales[j];
    }
    let mut b = vec![0.0; d + 1];
    b[d] = 1.0;
    let mut c = vec![0.0; k];
    c[n] = 1.0;

    match simplex::maximize(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        // The mean is interior for a full-rank sample, so t = 0 is feasible,
        // and the hull is bounded.
        LpOutcome::Infeasible | LpOutcome::Unbounded => {
            Err(crate::EelError::DomainError("ray exit LP failed; direction must be nonzero".into()))
        }
    }
}

/// Per-coordinate magnitudes of `X_i - center`, used to bring LP rows to unit scale.
fn row_scales(sample: &Sample, center: &[f64]) -> Vec<f64> {
    let mut scales = vec![0.0_f64; sample.dim()];
    for x in sample.rows() {
        for (s, (xi, ci)) in scales.iter_mut().zip(x.iter().zip(center)) {
            *s = s.max((xi - ci).abs());
        }
    }
    for s in &mut scales {
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    scales
}

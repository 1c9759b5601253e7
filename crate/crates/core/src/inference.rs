//! Chi-square calibrated confidence sets for the four statistics.
//!
//! Every method's region is `{theta : statistic(theta) <= c}`. For the
//! extended statistics membership never needs the inverse mapping: since
//! the mapping scales each contour of `l` radially, `l*(theta) <= c` holds
//! exactly when the point `mean + (theta - mean) / gamma(n, c)` lies in the
//! hull with `l <= c` there.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bartlett::{bartlett_plugin, bel_loglik};
use crate::chisq::chisq_quantile;
use crate::el::{oel_loglik, LogLik};
use crate::error::{EelError, Result};
use crate::hull::ray_exit_distance;
use crate::mapping::{eel_loglik, expansion_factor, point_on_ray, ExpansionSpec};
use crate::sample::Sample;

/// Which log-likelihood ratio statistic a confidence set is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Original empirical likelihood, infinite outside the hull.
    Oel,
    /// Extended likelihood with the first-order expansion factor.
    Eel1,
    /// Extended likelihood with the Bartlett-matched second-order factor.
    Eel2,
    /// Bartlett-corrected original likelihood.
    Bel,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Oel, Method::Eel1, Method::Eel2, Method::Bel];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Oel => "oel",
            Method::Eel1 => "eel1",
            Method::Eel2 => "eel2",
            Method::Bel => "bel",
        }
    }

    /// Whether the method depends on a Bartlett constant.
    pub fn needs_bartlett(&self) -> bool {
        matches!(self, Method::Eel2 | Method::Bel)
    }

    /// Whether the statistic is finite on all of `R^d`.
    pub fn is_extended(&self) -> bool {
        matches!(self, Method::Eel1 | Method::Eel2)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = EelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "oel" => Ok(Method::Oel),
            "eel1" => Ok(Method::Eel1),
            "eel2" => Ok(Method::Eel2),
            "bel" => Ok(Method::Bel),
            other => Err(EelError::UnsupportedMethod(format!("unknown method {other:?}"))),
        }
    }
}

/// A calibrated confidence set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfidenceResult {
    pub method: Method,
    pub level: f64,
    /// Chi-square quantile the statistic is compared against.
    pub critical: f64,
    /// Interval endpoints for scalar samples.
    pub interval: Option<(f64, f64)>,
    /// Bartlett constant used by second-order methods.
    pub b_used: Option<f64>,
}

/// The Bartlett constant a method will use: `b` when given, otherwise the
/// plug-in estimate for scalar samples. `None` for methods that need none.
pub fn resolve_bartlett(sample: &Sample, method: Method, b: Option<f64>) -> Result<Option<f64>> {
    if !method.needs_bartlett() {
        return Ok(None);
    }
    match b {
        Some(b) => Ok(Some(b)),
        None if sample.dim() == 1 => Ok(Some(bartlett_plugin(sample)?)),
        None => Err(EelError::UnsupportedMethod(format!(
            "{method} needs an explicit Bartlett constant when d = {}",
            sample.dim()
        ))),
    }
}

fn expansion_for(method: Method, b: Option<f64>) -> Option<ExpansionSpec> {
    match method {
        Method::Eel1 => Some(ExpansionSpec::FirstOrder),
        Method::Eel2 => Some(ExpansionSpec::second_order(b.expect("resolved Bartlett constant"))),
        Method::Oel | Method::Bel => None,
    }
}

/// Value of the method's statistic at `theta`.
pub fn statistic(sample: &Sample, method: Method, theta: &[f64], b: Option<f64>) -> Result<LogLik> {
    let b = resolve_bartlett(sample, method, b)?;
    match method {
        Method::Oel => oel_loglik(sample, theta),
        Method::Bel => bel_loglik(sample, theta, b.unwrap()),
        Method::Eel1 | Method::Eel2 => {
            Ok(LogLik::Finite(eel_loglik(sample, &expansion_for(method, b).unwrap(), theta)?))
        }
    }
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(EelError::DomainError(format!("confidence level must lie in (0, 1), got {level}")))
    }
}

/// Whether `theta` lies in the method's `level` confidence region.
pub fn region_contains(sample: &Sample, method: Method, level: f64, theta: &[f64], b: Option<f64>) -> Result<bool> {
    check_level(level)?;
    let critical = chisq_quantile(sample.dim(), level)?;
    region_contains_at(sample, method, critical, theta, b)
}

/// Whether the method's statistic at `theta` is at most `critical`.
pub fn region_contains_at(
    sample: &Sample,
    method: Method,
    critical: f64,
    theta: &[f64],
    b: Option<f64>,
) -> Result<bool> {
    sample.check_point(theta)?;
    sample.require_full_rank()?;
    if !(critical.is_finite() && critical >= 0.0) {
        return Err(EelError::DomainError(format!("critical value must be finite and nonnegative, got {critical}")));
    }
    let b = resolve_bartlett(sample, method, b)?;
    Within::new(sample, method, critical, b)?.test(theta)
}

/// Membership test for one (sample, method, critical value).
struct Within<'a> {
    sample: &'a Sample,
    method: Method,
    critical: f64,
    b: Option<f64>,
    /// `1 / gamma(n, critical)` for the extended methods.
    shrink: Option<f64>,
}

impl<'a> Within<'a> {
    fn new(sample: &'a Sample, method: Method, critical: f64, b: Option<f64>) -> Result<Self> {
        let shrink = match expansion_for(method, b) {
            Some(spec) => Some(1.0 / expansion_factor(&spec, sample.n(), critical)?),
            None => None,
        };
        if method == Method::Bel {
            let b = b.unwrap();
            if b >= sample.n() as f64 {
                return Err(EelError::InvalidCorrection { b, n: sample.n() });
            }
        }
        Ok(Self { sample, method, critical, b, shrink })
    }

    fn test(&self, theta: &[f64]) -> Result<bool> {
        let center = self.sample.mean();
        if theta == center {
            return Ok(true);
        }
        match self.method {
            Method::Oel => Ok(oel_loglik(self.sample, theta)?.at_most(self.critical)),
            Method::Bel => Ok(bel_loglik(self.sample, theta, self.b.unwrap())?.at_most(self.critical)),
            Method::Eel1 | Method::Eel2 => {
                // l* <= l on the hull, so a small l settles it.
                if oel_loglik(self.sample, theta)?.at_most(self.critical) {
                    return Ok(true);
                }
                let s = self.shrink.unwrap();
                let pulled: Vec<f64> = center.iter().zip(theta).map(|(c, t)| c + s * (t - c)).collect();
                Ok(oel_loglik(self.sample, &pulled)?.at_most(self.critical))
            }
        }
    }
}

/// Bisection on a predicate that holds at `inside` and fails at `outside`.
/// Returns the last point known to satisfy it.
fn bisect_boundary(
    mut inside: f64,
    mut outside: f64,
    tol: f64,
    mut pred: impl FnMut(f64) -> Result<bool>,
) -> Result<f64> {
    for _ in 0..MAX_BISECTION {
        if (outside - inside).abs() <= tol {
            break;
        }
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if pred(mid)? {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(inside)
}

const MAX_BISECTION: usize = 100;
/// Endpoint tolerance relative to the sample range.
const ENDPOINT_RTOL: f64 = 1e-13;

/// Confidence interval for a scalar mean.
///
/// ```
/// use eelkit::{confidence_interval_1d, Method, Sample};
///
/// let s = Sample::univariate(&[0.3, -1.2, 0.8, 2.1, -0.4, 0.0, 1.5, -0.9]).unwrap();
/// let oel = confidence_interval_1d(&s, Method::Oel, 0.95, None).unwrap();
/// let eel = confidence_interval_1d(&s, Method::Eel1, 0.95, None).unwrap();
/// let ((a, b), (c, d)) = (oel.interval.unwrap(), eel.interval.unwrap());
/// assert!(c < a && b < d);
/// ```
pub fn confidence_interval_1d(sample: &Sample, method: Method, level: f64, b: Option<f64>) -> Result<ConfidenceResult> {
    if sample.dim() != 1 {
        return Err(EelError::UnsupportedDimension(sample.dim()));
    }
    sample.require_full_rank()?;
    check_level(level)?;
    let critical = chisq_quantile(1, level)?;
    let b_used = resolve_bartlett(sample, method, b)?;
    let within = Within::new(sample, method, critical, b_used)?;

    let center = sample.mean()[0];
    let (min, max) = sample.column(0).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    let range = max - min;
    let tol = ENDPOINT_RTOL * range;

    let endpoint = |toward: f64, side: f64| -> Result<f64> {
        let mut outside = toward;
        if method.is_extended() {
            // Widen geometrically until the statistic exceeds the critical value.
            let mut reach = (toward - center).abs();
            while within.test(&[center + side * reach])? {
                reach *= 2.0;
            }
            outside = center + side * reach;
        }
        bisect_boundary(center, outside, tol, |t| within.test(&[t]))
    };
    let lo = endpoint(min, -1.0)?;
    let hi = endpoint(max, 1.0)?;
    Ok(ConfidenceResult { method, level, critical, interval: Some((lo, hi)), b_used })
}

/// Points where the statistic reaches `tau` along `n_rays` equally spaced
/// directions from the sample mean, in counterclockwise order.
pub fn contour_polyline_2d(
    sample: &Sample,
    method: Method,
    tau: f64,
    n_rays: usize,
    b: Option<f64>,
) -> Result<Vec<[f64; 2]>> {
    if sample.dim() != 2 {
        return Err(EelError::UnsupportedDimension(sample.dim()));
    }
    if n_rays < 8 {
        return Err(EelError::DomainError(format!("need at least 8 rays, got {n_rays}")));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(EelError::DomainError(format!("contour level must be positive and finite, got {tau}")));
    }
    sample.require_full_rank()?;
    let b = resolve_bartlett(sample, method, b)?;
    let within = Within::new(sample, method, tau, b)?;
    let center = sample.mean();

    (0..n_rays)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n_rays as f64;
            let u = [angle.cos(), angle.sin()];
            let exit = ray_exit_distance(sample, &u)?;
            let mut outside = exit;
            if method.is_extended() {
                while within.test(&point_on_ray(center, &u, outside))? {
                    outside *= 2.0;
                }
            }
            let test = |z: f64| within.test(&point_on_ray(center, &u, z));
            let zeta = bisect_boundary(0.0, outside, ENDPOINT_RTOL * exit, test)?;
            let p = point_on_ray(center, &u, zeta);
            Ok([p[0], p[1]])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn skewed() -> Sample {
        Sample::univariate(&[0.12, 2.9, 0.4, 1.7, 0.05, 0.8, 3.6, 0.33, 1.1, 0.6, 0.2, 5.2]).unwrap()
    }

    fn square() -> Sample {
        Sample::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]).unwrap()
    }

    fn interval(s: &Sample, m: Method, level: f64) -> (f64, f64) {
        confidence_interval_1d(s, m, level, None).unwrap().interval.unwrap()
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("ael".parse::<Method>().is_err());
    }

    #[test]
    fn worked_region_example() {
        let s = Sample::univariate(&[-1.0, 2.0]).unwrap();
        let c = 0.235566 + 1e-6;
        assert!(region_contains_at(&s, Method::Eel1, c, &[-0.029446], None).unwrap());
        assert!(!region_contains_at(&s, Method::Eel1, c, &[-0.04], None).unwrap());
        assert!(!region_contains(&s, Method::Oel, 0.99, &[3.0], None).unwrap());
        for m in [Method::Oel, Method::Eel1] {
            assert!(region_contains(&s, m, 0.5, &[0.5], None).unwrap());
        }
    }

    #[test]
    fn endpoints_solve_calibration_equation() {
        let s = skewed();
        for m in Method::ALL {
            let r = confidence_interval_1d(&s, m, 0.95, None).unwrap();
            let (lo, hi) = r.interval.unwrap();
            assert!(lo < s.mean()[0] && s.mean()[0] < hi);
            for e in [lo, hi] {
                let v = statistic(&s, m, &[e], r.b_used).unwrap().finite().unwrap();
                assert!((v - r.critical).abs() < 1e-6, "{m}: {v} vs {}", r.critical);
            }
        }
    }

    #[test]
    fn first_order_interval_is_scaled_oel_interval() {
        let s = skewed();
        let c = chisq_quantile(1, 0.95).unwrap();
        let g = 1.0 + c / (2.0 * s.n() as f64);
        let m = s.mean()[0];
        let (a, b) = interval(&s, Method::Oel, 0.95);
        let (c1, d1) = interval(&s, Method::Eel1, 0.95);
        assert!((c1 - (m + g * (a - m))).abs() < 1e-9);
        assert!((d1 - (m + g * (b - m))).abs() < 1e-9);
    }

    #[test]
    fn nesting_and_ordering() {
        let s = skewed();
        for m in Method::ALL {
            let mut prev: Option<(f64, f64)> = None;
            for level in [0.90, 0.95, 0.99] {
                let cur = interval(&s, m, level);
                if let Some(p) = prev {
                    assert!(cur.0 < p.0 && p.1 < cur.1, "{m} at {level}");
                }
                prev = Some(cur);
            }
        }
        let oel = interval(&s, Method::Oel, 0.95);
        for m in [Method::Eel1, Method::Bel] {
            let w = interval(&s, m, 0.95);
            assert!(w.0 <= oel.0 && oel.1 <= w.1, "{m}");
        }
    }

    #[test]
    fn region_agrees_with_interval() {
        let s = skewed();
        for m in Method::ALL {
            let (lo, hi) = interval(&s, m, 0.9);
            for k in 0..200 {
                let t = -4.0 + 14.0 * k as f64 / 199.0;
                if (t - lo).abs() < 1e-9 || (t - hi).abs() < 1e-9 {
                    continue;
                }
                let inside = region_contains(&s, m, 0.9, &[t], None).unwrap();
                assert_eq!(inside, lo <= t && t <= hi, "{m} at {t}");
            }
        }
    }

    #[test]
    fn region_matches_inverted_statistic() {
        let s = skewed();
        for m in [Method::Eel1, Method::Eel2] {
            for k in 0..60 {
                let t = -2.0 + 12.0 * k as f64 / 59.0;
                let v = statistic(&s, m, &[t], None).unwrap().finite().unwrap();
                if (v - 2.0).abs() < 1e-7 {
                    continue;
                }
                assert_eq!(region_contains_at(&s, m, 2.0, &[t], None).unwrap(), v <= 2.0, "{m} at {t}");
            }
        }
    }

    #[test]
    fn square_contours_are_symmetric() {
        let s = square();
        let pts = contour_polyline_2d(&s, Method::Oel, 1.0, 16, None).unwrap();
        let radii: Vec<f64> = pts.iter().map(|p| p[0].hypot(p[1])).collect();
        for k in 0..16 {
            assert!((radii[k] - radii[(k + 4) % 16]).abs() < 1e-8);
        }
        // strictly inside the hull |x| + |y| < 1
        assert!(pts.iter().all(|p| p[0].abs() + p[1].abs() < 1.0));
    }

    #[test]
    fn first_order_contour_scales_oel_contour() {
        let s = Sample::from_rows(&[
            [0.1, 0.3],
            [1.4, -0.2],
            [-0.7, 0.9],
            [0.5, 1.8],
            [-1.1, -0.6],
            [0.9, -1.3],
            [0.0, 0.2],
        ])
        .unwrap();
        let tau = 2.5;
        let g = 1.0 + tau / (2.0 * s.n() as f64);
        let m = s.mean();
        let oel = contour_polyline_2d(&s, Method::Oel, tau, 24, None).unwrap();
        let eel = contour_polyline_2d(&s, Method::Eel1, tau, 24, None).unwrap();
        for (p, q) in oel.iter().zip(&eel) {
            for j in 0..2 {
                assert!((q[j] - (m[j] + g * (p[j] - m[j]))).abs() < 1e-6);
            }
        }
        let tiny = contour_polyline_2d(&s, Method::Oel, 1e-10, 8, None).unwrap();
        assert!(tiny.iter().all(|p| (p[0] - m[0]).hypot(p[1] - m[1]) < 1e-3));
    }

    #[test]
    fn argument_errors() {
        let flat = Sample::univariate(&[1.0; 6]).unwrap();
        assert!(matches!(
            confidence_interval_1d(&flat, Method::Oel, 0.9, None),
            Err(EelError::DegenerateSample { .. })
        ));
        let s = square();
        assert!(matches!(
            region_contains(&s, Method::Eel2, 0.9, &[0.0, 0.0], None),
            Err(EelError::UnsupportedMethod(_))
        ));
        assert!(region_contains(&s, Method::Eel2, 0.9, &[0.1, 0.0], Some(1.0)).unwrap());
        assert!(contour_polyline_2d(&s, Method::Oel, 1.0, 4, None).is_err());
        assert!(confidence_interval_1d(&skewed(), Method::Oel, 1.0, None).is_err());
    }
}

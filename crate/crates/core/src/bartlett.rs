//! Bartlett correction for the scalar mean.
//!
//! The constant `b = mu4 / (2 mu2^2) - mu3^2 / (3 mu2^3)` makes
//! `l(theta) (1 - b/n)` chi-square to second order. It also sets the
//! strength of the second-order expansion factor.

use serde::Serialize;

use crate::el::{oel_loglik, LogLik};
use crate::error::{EelError, Result};
use crate::sample::Sample;

/// Central moments of a scalar distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSet {
    pub mu2: f64,
    pub mu3: f64,
    pub mu4: f64,
}

impl MomentSet {
    pub fn new(mu2: f64, mu3: f64, mu4: f64) -> Result<Self> {
        let m = Self { mu2, mu3, mu4 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu2.is_finite() && self.mu3.is_finite() && self.mu4.is_finite()) {
            return Err(EelError::InvalidMoments("moments must be finite".into()));
        }
        if self.mu2 <= 0.0 {
            return Err(EelError::InvalidMoments(format!("mu2 must be positive, got {}", self.mu2)));
        }
        // Relative slack: sample moments satisfy the bound only up to roundoff.
        if self.mu4 < self.mu2 * self.mu2 * (1.0 - 1e-12) {
            return Err(EelError::InvalidMoments(format!(
                "mu4 = {} is below mu2^2 = {}",
                self.mu4,
                self.mu2 * self.mu2
            )));
        }
        Ok(())
    }

    /// Central moments of a sample with divisor `n`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        for &x in values {
            let d = x - mean;
            let d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        Self::new(m2 / n, m3 / n, m4 / n)
    }
}

/// Bartlett constant `mu4 / (2 mu2^2) - mu3^2 / (3 mu2^3)`.
///
/// ```
/// use eelkit::{bartlett_constant, MomentSet};
///
/// let normal = MomentSet::new(1.0, 0.0, 3.0).unwrap();
/// assert_eq!(bartlett_constant(&normal).unwrap(), 1.5);
/// ```
pub fn bartlett_constant(moments: &MomentSet) -> Result<f64> {
    moments.validate()?;
    let MomentSet { mu2, mu3, mu4 } = *moments;
    Ok(mu4 / (2.0 * mu2 * mu2) - mu3 * mu3 / (3.0 * mu2 * mu2 * mu2))
}

/// Plug-in estimate of the Bartlett constant from sample central moments.
///
/// Only scalar samples are supported; a multivariate constant must be
/// supplied by the caller.
pub fn bartlett_plugin(sample: &Sample) -> Result<f64> {
    if sample.dim() != 1 {
        return Err(EelError::UnsupportedDimension(sample.dim()));
    }
    if sample.n() < 5 {
        return Err(EelError::InvalidSample(format!(
            "plug-in Bartlett estimate needs at least 5 observations, got {}",
            sample.n()
        )));
    }
    bartlett_constant(&MomentSet::from_values(sample.as_flat())?)
}

/// Bartlett-corrected statistic `l(theta) (1 - b/n)`.
///
/// Shares the hull domain of the uncorrected statistic.
pub fn bel_loglik(sample: &Sample, theta: &[f64], b: f64) -> Result<LogLik> {
    let n = sample.n();
    if !b.is_finite() || b >= n as f64 {
        return Err(EelError::InvalidCorrection { b, n });
    }
    if b == 0.0 {
        return oel_loglik(sample, theta);
    }
    Ok(oel_loglik(sample, theta)?.scaled(1.0 - b / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::{eel_loglik, ExpansionSpec};

    fn b_of(mu2: f64, mu3: f64, mu4: f64) -> f64 {
        bartlett_constant(&MomentSet::new(mu2, mu3, mu4).unwrap()).unwrap()
    }

    #[test]
    fn theoretical_constants() {
        assert_eq!(b_of(1.0, 0.0, 3.0), 1.5);
        assert_eq!(b_of(1.0, 0.0, 1.0), 0.5);
        assert!((b_of(2.0, 8.0, 60.0) - 29.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_moments() {
        assert!(matches!(MomentSet::new(0.0, 0.0, 1.0), Err(EelError::InvalidMoments(_))));
        assert!(matches!(MomentSet::new(1.0, 0.0, 0.5), Err(EelError::InvalidMoments(_))));
        assert!(MomentSet::new(1.0, f64::NAN, 3.0).is_err());
    }

    #[test]
    fn plugin_estimates() {
        // m2 = m4 = 2/3 padded to n = 6 with the same pattern twice
        let s = Sample::univariate(&[-1.0, 0.0, 1.0, -1.0, 0.0, 1.0]).unwrap();
        assert!((bartlett_plugin(&s).unwrap() - 0.75).abs() < 1e-12);
        let m = MomentSet::from_values(&[-1.0, 0.0, 1.0]).unwrap();
        assert!((bartlett_constant(&m).unwrap() - 0.75).abs() < 1e-12);

        let flat = Sample::univariate(&[2.0; 6]).unwrap();
        assert!(matches!(bartlett_plugin(&flat), Err(EelError::InvalidMoments(_))));

        let s2 = Sample::from_rows(&[[0.0, 1.0], [1.0, 0.0], [2.0, 2.0], [3.0, 1.0], [1.0, 3.0]]).unwrap();
        assert_eq!(bartlett_plugin(&s2), Err(EelError::UnsupportedDimension(2)));
    }

    #[test]
    fn bel_scales_oel() {
        let s = Sample::univariate(&[-1.0, 2.0]).unwrap();
        let l0 = 2.0 * 1.125_f64.ln();
        let v = bel_loglik(&s, &[0.0], 0.5).unwrap().finite().unwrap();
        assert!((v - 0.75 * l0).abs() < 1e-10);
        assert!((v - 0.176675).abs() < 1e-6);
        assert_eq!(bel_loglik(&s, &[0.5], 0.5).unwrap(), LogLik::Finite(0.0));
        assert_eq!(bel_loglik(&s, &[3.0], 0.5).unwrap(), LogLik::Infinite);
        assert_eq!(bel_loglik(&s, &[0.0], 0.0).unwrap(), oel_loglik(&s, &[0.0]).unwrap());
        assert!(matches!(bel_loglik(&s, &[0.0], 2.0), Err(EelError::InvalidCorrection { .. })));
    }

    #[test]
    fn second_order_matches_general_family() {
        let s = Sample::univariate(&[-1.3, 0.2, 0.9, 2.4, -0.5, 1.1, 0.0]).unwrap();
        let b = 1.7;
        let so = ExpansionSpec::SecondOrder { b, delta: Some(1.0) };
        let gen = ExpansionSpec::General { kappa: b / 2.0, m: 1.0, delta: 1.0 };
        for theta in [-3.0, -1.0, 0.5, 1.9, 2.3, 10.0] {
            let a = eel_loglik(&s, &so, &[theta]).unwrap();
            let c = eel_loglik(&s, &gen, &[theta]).unwrap();
            assert!((a - c).abs() < 1e-10, "{theta}: {a} vs {c}");
        }
    }
}

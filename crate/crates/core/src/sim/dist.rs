use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal, StudentT};
use serde::Serialize;

use crate::bartlett::{bartlett_constant, MomentSet};
use crate::error::{EelError, Result};
use crate::sample::Sample;

/// Data-generating distributions for the simulation scenarios.
///
/// In `Bv1` to `Bv3` each observation draws its own `D ~ U[1, 2]` and the
/// two coordinates are conditionally independent given `D`. Gamma laws
/// are parameterized by shape with unit scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DistributionSpec {
    StdNormal,
    StudentT5,
    ChiSq1,
    /// `0.3 N(0, 1) + 0.7 N(2, 1)`.
    NormalMixture,
    /// `X1 | D ~ N(0, D^2)`, `X2 | D ~ Gamma(1/D)`.
    Bv1,
    /// `X1 | D ~ Poisson(D)`, `X2 | D ~ Poisson(1/D)`.
    Bv2,
    /// `X1 | D ~ Gamma(D)`, `X2 | D ~ Gamma(1/D)`.
    Bv3,
    /// Two independent chi-square(1) coordinates.
    Bv4,
    /// Standard normal in `d` dimensions.
    MultiNormal(usize),
}

const MIX_WEIGHT: f64 = 0.3;
const MIX_SHIFT: f64 = 2.0;

impl DistributionSpec {
    pub fn dim(&self) -> usize {
        match *self {
            DistributionSpec::StdNormal
            | DistributionSpec::StudentT5
            | DistributionSpec::ChiSq1
            | DistributionSpec::NormalMixture => 1,
            DistributionSpec::Bv1 | DistributionSpec::Bv2 | DistributionSpec::Bv3 | DistributionSpec::Bv4 => 2,
            DistributionSpec::MultiNormal(d) => d,
        }
    }

    pub fn true_mean(&self) -> Vec<f64> {
        let ln2 = std::f64::consts::LN_2;
        match *self {
            DistributionSpec::StdNormal | DistributionSpec::StudentT5 => vec![0.0],
            DistributionSpec::ChiSq1 => vec![1.0],
            DistributionSpec::NormalMixture => vec![(1.0 - MIX_WEIGHT) * MIX_SHIFT],
            DistributionSpec::Bv1 => vec![0.0, ln2],
            DistributionSpec::Bv2 | DistributionSpec::Bv3 => vec![1.5, ln2],
            DistributionSpec::Bv4 => vec![1.0, 1.0],
            DistributionSpec::MultiNormal(d) => vec![0.0; d],
        }
    }

    /// Central moments of the scalar families.
    pub fn moments(&self) -> Option<MomentSet> {
        let m = match *self {
            DistributionSpec::StdNormal => MomentSet { mu2: 1.0, mu3: 0.0, mu4: 3.0 },
            // nu = 5: variance nu/(nu-2), fourth moment 3 nu^2 / ((nu-2)(nu-4))
            DistributionSpec::StudentT5 => MomentSet { mu2: 5.0 / 3.0, mu3: 0.0, mu4: 25.0 },
            DistributionSpec::ChiSq1 => MomentSet { mu2: 2.0, mu3: 8.0, mu4: 60.0 },
            DistributionSpec::NormalMixture => {
                // Components centered at -0.6 and 1.4 about the overall mean.
                let mean = (1.0 - MIX_WEIGHT) * MIX_SHIFT;
                let comps = [(MIX_WEIGHT, -mean), (1.0 - MIX_WEIGHT, MIX_SHIFT - mean)];
                let (mut mu2, mut mu3, mut mu4) = (0.0, 0.0, 0.0);
                for (w, a) in comps {
                    mu2 += w * (a * a + 1.0);
                    mu3 += w * (a * a * a + 3.0 * a);
                    mu4 += w * (a.powi(4) + 6.0 * a * a + 3.0);
                }
                MomentSet { mu2, mu3, mu4 }
            }
            _ => return None,
        };
        Some(m)
    }

    /// Theoretical Bartlett constant of the scalar families.
    pub fn bartlett(&self) -> Option<f64> {
        self.moments().map(|m| bartlett_constant(&m).expect("valid theoretical moments"))
    }

    pub fn name(&self) -> String {
        match *self {
            DistributionSpec::StdNormal => "std-normal".into(),
            DistributionSpec::StudentT5 => "student-t5".into(),
            DistributionSpec::ChiSq1 => "chisq1".into(),
            DistributionSpec::NormalMixture => "normal-mixture".into(),
            DistributionSpec::Bv1 => "bv1".into(),
            DistributionSpec::Bv2 => "bv2".into(),
            DistributionSpec::Bv3 => "bv3".into(),
            DistributionSpec::Bv4 => "bv4".into(),
            DistributionSpec::MultiNormal(d) => format!("multi-normal-{d}"),
        }
    }

    fn draw_row<R: Rng + ?Sized>(&self, rng: &mut R, row: &mut Vec<f64>) {
        let normal = |rng: &mut R| -> f64 { StandardNormal.sample(rng) };
        let gamma = |rng: &mut R, shape: f64| Gamma::new(shape, 1.0).expect("positive shape").sample(rng);
        let mixing = |rng: &mut R| 1.0 + rng.random::<f64>();
        match *self {
            DistributionSpec::StdNormal => row.push(normal(rng)),
            DistributionSpec::StudentT5 => row.push(StudentT::new(5.0).expect("positive dof").sample(rng)),
            DistributionSpec::ChiSq1 => {
                let z = normal(rng);
                row.push(z * z);
            }
            DistributionSpec::NormalMixture => {
                let shift = if rng.random::<f64>() < MIX_WEIGHT { 0.0 } else { MIX_SHIFT };
                row.push(shift + normal(rng));
            }
            DistributionSpec::Bv1 => {
                let d = mixing(rng);
                row.push(d * normal(rng));
                row.push(gamma(rng, 1.0 / d));
            }
            DistributionSpec::Bv2 => {
                let d = mixing(rng);
                row.push(poisson(rng, d));
                row.push(poisson(rng, 1.0 / d));
            }
            DistributionSpec::Bv3 => {
                let d = mixing(rng);
                row.push(gamma(rng, d));
                row.push(gamma(rng, 1.0 / d));
            }
            DistributionSpec::Bv4 => {
                for _ in 0..2 {
                    let z = normal(rng);
                    row.push(z * z);
                }
            }
            DistributionSpec::MultiNormal(d) => row.extend((0..d).map(|_| normal(rng))),
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for DistributionSpec {
    type Err = EelError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Ok(match key.as_str() {
            "std-normal" | "normal" => DistributionSpec::StdNormal,
            "student-t5" | "t5" => DistributionSpec::StudentT5,
            "chisq1" => DistributionSpec::ChiSq1,
            "normal-mixture" | "mixture" => DistributionSpec::NormalMixture,
            "bv1" => DistributionSpec::Bv1,
            "bv2" => DistributionSpec::Bv2,
            "bv3" => DistributionSpec::Bv3,
            "bv4" => DistributionSpec::Bv4,
            _ => match key.strip_prefix("multi-normal-").and_then(|d| d.parse::<usize>().ok()) {
                Some(d) if d >= 1 => DistributionSpec::MultiNormal(d),
                _ => return Err(EelError::InvalidScenario(format!("unknown distribution {s:?}"))),
            },
        })
    }
}

/// Poisson variate by sequential inversion; intended for small means.
fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
    let u: f64 = rng.random();
    let mut p = (-mean).exp();
    let mut cdf = p;
    let mut k = 0u32;
    while u > cdf && p > 0.0 {
        k += 1;
        p *= mean / k as f64;
        cdf += p;
    }
    k as f64
}

/// `n` independent observations from `spec`.
pub fn draw_sample<R: Rng + ?Sized>(spec: &DistributionSpec, n: usize, rng: &mut R) -> Result<Sample> {
    let d = spec.dim();
    if n <= d {
        return Err(EelError::InvalidScenario(format!("sample size {n} must exceed dimension {d}")));
    }
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        spec.draw_row(rng, &mut data);
    }
    Sample::from_flat(data, d)
}

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{EelError, Result};
use crate::inference::{confidence_interval_1d, region_contains, Method};
use crate::sample::Sample;

use super::dist::{draw_sample, DistributionSpec};
use super::rng::replication_rng;

/// Execution settings that never affect results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

/// Runs `f` on `reps` independent samples and returns the results in
/// replication order. Replication `i` draws from stream `i` of `seed`, so
/// the output does not depend on scheduling.
pub fn replicate<T, F>(
    spec: &DistributionSpec,
    n: usize,
    reps: usize,
    seed: u64,
    options: RunOptions,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Sample) -> Result<T> + Sync,
{
    if n <= spec.dim() {
        return Err(EelError::InvalidScenario(format!("sample size {n} must exceed dimension {}", spec.dim())));
    }
    let work = || {
        (0..reps)
            .into_par_iter()
            .map(|i| {
                let sample = draw_sample(spec, n, &mut replication_rng(seed, i as u64))?;
                f(&sample)
            })
            .collect::<Result<Vec<T>>>()
    };
    match options.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| EelError::InvalidScenario(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioInfo {
    pub distribution: String,
    pub dim: usize,
    pub n: usize,
    pub level: f64,
    pub true_mean: Vec<f64>,
    /// Fixed Bartlett constant, when one was supplied.
    pub b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodCoverage {
    pub method: Method,
    pub hits: usize,
    pub reps: usize,
    pub coverage: f64,
    /// Binomial standard error `sqrt(p (1 - p) / reps)`.
    pub mc_se: f64,
    /// Replications where the statistic was undefined (flat sample, or a
    /// plug-in Bartlett constant at least `n`); counted as misses.
    pub undefined: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub scenario: ScenarioInfo,
    pub reps: usize,
    pub seed: u64,
    pub methods: Vec<MethodCoverage>,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodLength {
    pub method: Method,
    /// Mean of `hi - lo` over replications with a defined interval.
    pub mean_length: f64,
    pub reps: usize,
    pub undefined: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthReport {
    pub scenario: ScenarioInfo,
    pub reps: usize,
    pub seed: u64,
    pub methods: Vec<MethodLength>,
    #[serde(skip)]
    pub wall_time: Duration,
}

fn validate(
    spec: &DistributionSpec,
    n: usize,
    level: f64,
    methods: &[Method],
    reps: usize,
    b: Option<f64>,
) -> Result<()> {
    let d = spec.dim();
    if n <= d {
        return Err(EelError::InvalidScenario(format!("sample size {n} must exceed dimension {d}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(EelError::InvalidScenario(format!("level must lie in (0, 1), got {level}")));
    }
    if reps == 0 {
        return Err(EelError::InvalidScenario("need at least one replication".into()));
    }
    if methods.is_empty() {
        return Err(EelError::InvalidScenario("no methods requested".into()));
    }
    if d > 1 && b.is_none() {
        if let Some(m) = methods.iter().find(|m| m.needs_bartlett()) {
            return Err(EelError::UnsupportedMethod(format!("{m} needs an explicit Bartlett constant when d = {d}")));
        }
    }
    Ok(())
}

/// Errors that make a method's statistic undefined for one sample rather
/// than invalidating the run.
fn undefined_for_sample(e: &EelError) -> bool {
    matches!(e, EelError::DegenerateSample { .. } | EelError::InvalidCorrection { .. } | EelError::InvalidMoments(_))
}

fn scenario(spec: &DistributionSpec, n: usize, level: f64, b: Option<f64>) -> ScenarioInfo {
    ScenarioInfo { distribution: spec.name(), dim: spec.dim(), n, level, true_mean: spec.true_mean(), b }
}

/// Coverage of the true mean by each method's `level` region.
///
/// Second-order methods use `b` when given and otherwise the per-sample
/// plug-in estimate, which exists only for scalar data.
#[allow(clippy::too_many_arguments)]
pub fn coverage_run(
    spec: &DistributionSpec,
    n: usize,
    level: f64,
    methods: &[Method],
    b: Option<f64>,
    reps: usize,
    seed: u64,
    options: RunOptions,
) -> Result<CoverageReport> {
    validate(spec, n, level, methods, reps, b)?;
    let start = Instant::now();
    let theta0 = spec.true_mean();
    // Per replication and method: Some(hit) or None when undefined.
    let outcomes = replicate(spec, n, reps, seed, options, |s| {
        methods
            .iter()
            .map(|&m| match region_contains(s, m, level, &theta0, b) {
                Ok(hit) => Ok(Some(hit)),
                Err(e) if undefined_for_sample(&e) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let methods = methods
        .iter()
        .enumerate()
        .map(|(k, &method)| {
            let hits = outcomes.iter().filter(|o| o[k] == Some(true)).count();
            let undefined = outcomes.iter().filter(|o| o[k].is_none()).count();
            let coverage = hits as f64 / reps as f64;
            MethodCoverage {
                method,
                hits,
                reps,
                coverage,
                mc_se: (coverage * (1.0 - coverage) / reps as f64).sqrt(),
                undefined,
            }
        })
        .collect();
    Ok(CoverageReport { scenario: scenario(spec, n, level, b), reps, seed, methods, wall_time: start.elapsed() })
}

/// Mean confidence interval length per method for a scalar scenario.
#[allow(clippy::too_many_arguments)]
pub fn length_run(
    spec: &DistributionSpec,
    n: usize,
    level: f64,
    methods: &[Method],
    b: Option<f64>,
    reps: usize,
    seed: u64,
    options: RunOptions,
) -> Result<LengthReport> {
    if spec.dim() != 1 {
        return Err(EelError::InvalidScenario(format!(
            "interval lengths need a scalar scenario, {spec} has d = {}",
            spec.dim()
        )));
    }
    validate(spec, n, level, methods, reps, b)?;
    let start = Instant::now();
    let lengths = replicate(spec, n, reps, seed, options, |s| {
        methods
            .iter()
            .map(|&m| match confidence_interval_1d(s, m, level, b) {
                Ok(r) => {
                    let (lo, hi) = r.interval.expect("scalar interval");
                    Ok(Some(hi - lo))
                }
                Err(e) if undefined_for_sample(&e) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let methods = methods
        .iter()
        .enumerate()
        .map(|(k, &method)| {
            let defined: Vec<f64> = lengths.iter().filter_map(|l| l[k]).collect();
            // Summed in replication order so the mean is reproducible.
            let mean_length = defined.iter().sum::<f64>() / defined.len().max(1) as f64;
            MethodLength { method, mean_length, reps, undefined: reps - defined.len() }
        })
        .collect();
    Ok(LengthReport { scenario: scenario(spec, n, level, b), reps, seed, methods, wall_time: start.elapsed() })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BOTH: [Method; 2] = [Method::Oel, Method::Eel1];

    #[test]
    fn coverage_is_thread_independent() {
        let spec = DistributionSpec::Bv1;
        let run = |t| coverage_run(&spec, 15, 0.9, &BOTH, None, 200, 11, RunOptions { threads: Some(t) }).unwrap();
        let (a, b) = (run(1), run(4));
        assert_eq!(a.methods, b.methods);
        for m in &a.methods {
            assert_eq!(m.coverage, m.hits as f64 / m.reps as f64);
            assert!((m.mc_se - (m.coverage * (1.0 - m.coverage) / 200.0).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn first_order_covers_more() {
        let r = coverage_run(&DistributionSpec::StdNormal, 10, 0.9, &Method::ALL, None, 400, 5, RunOptions::default())
            .unwrap();
        let get = |m: Method| r.methods.iter().find(|c| c.method == m).unwrap().hits;
        assert!(get(Method::Eel1) >= get(Method::Oel));
        assert!(get(Method::Bel) >= get(Method::Oel));
    }

    #[test]
    fn coverage_increases_with_level() {
        let spec = DistributionSpec::ChiSq1;
        let low = coverage_run(&spec, 20, 0.9, &Method::ALL, None, 300, 3, RunOptions::default()).unwrap();
        let high = coverage_run(&spec, 20, 0.99, &Method::ALL, None, 300, 3, RunOptions::default()).unwrap();
        for (l, h) in low.methods.iter().zip(&high.methods) {
            assert!(h.hits >= l.hits, "{}", l.method);
        }
    }

    #[test]
    fn lengths_shrink_with_n_and_expand_with_factor() {
        let spec = DistributionSpec::StdNormal;
        let small = length_run(&spec, 10, 0.95, &BOTH, None, 200, 1, RunOptions::default()).unwrap();
        let large = length_run(&spec, 50, 0.95, &BOTH, None, 200, 1, RunOptions::default()).unwrap();
        for (s, l) in small.methods.iter().zip(&large.methods) {
            assert!(l.mean_length < s.mean_length);
        }
        assert!(small.methods[1].mean_length > small.methods[0].mean_length);

        let pairs = replicate(&spec, 12, 50, 8, RunOptions::default(), |s| {
            let a = confidence_interval_1d(s, Method::Oel, 0.9, None)?.interval.unwrap();
            let b = confidence_interval_1d(s, Method::Eel1, 0.9, None)?.interval.unwrap();
            Ok((a.1 - a.0, b.1 - b.0))
        })
        .unwrap();
        assert!(pairs.iter().all(|&(o, e)| o > 0.0 && e >= o));
    }

    #[test]
    fn scenario_errors() {
        let opts = RunOptions::default();
        assert!(matches!(
            coverage_run(&DistributionSpec::Bv4, 2, 0.9, &BOTH, None, 100, 0, opts),
            Err(EelError::InvalidScenario(_))
        ));
        assert!(matches!(
            coverage_run(&DistributionSpec::Bv4, 20, 0.9, &[Method::Eel2], None, 100, 0, opts),
            Err(EelError::UnsupportedMethod(_))
        ));
        assert!(coverage_run(&DistributionSpec::Bv4, 20, 0.9, &[Method::Eel2], Some(2.0), 100, 0, opts).is_ok());
        assert!(length_run(&DistributionSpec::Bv4, 20, 0.9, &BOTH, None, 100, 0, opts).is_err());
    }
}

//! Empirical likelihood for a multivariate mean, and its extension to the
//! full parameter space.
//!
//! [`oel_loglik`] is the original log-likelihood ratio statistic, finite only
//! inside the convex hull of the data. [`eel_loglik`] is the extended
//! statistic obtained through the composite similarity mapping
//! ([`apply_map`], [`invert_map`]), finite everywhere. The calibration
//! routines turn either into chi-square calibrated intervals, region tests
//! and contours, and [`sim`] reproduces coverage experiments.
//!
//! ```
//! use eelkit::{confidence_interval_1d, Method, Sample};
//!
//! let s = Sample::univariate(&[2.1, 0.4, 1.7, 3.3, 0.9, 1.2]).unwrap();
//! let r = confidence_interval_1d(&s, Method::Eel1, 0.95, None).unwrap();
//! let (lo, hi) = r.interval.unwrap();
//! assert!(lo < s.mean()[0] && s.mean()[0] < hi);
//! ```

mod bartlett;
mod chisq;
mod el;
mod error;
mod hull;
mod inference;
mod mapping;
mod sample;
pub mod sim;
mod simplex;

pub use bartlett::{bartlett_constant, bartlett_plugin, bel_loglik, MomentSet};
pub use chisq::{chisq_cdf, chisq_quantile};
pub use el::{dual_objective, oel_loglik, solve_lambda, solve_lambda_with, ElEvaluation, LogLik, SolverOptions};
pub use error::{EelError, Result};
pub use hull::{hull_contains, hull_margin, ray_exit_distance, HULL_MARGIN_TOL};
pub use inference::{
    confidence_interval_1d, contour_polyline_2d, region_contains, region_contains_at, resolve_bartlett, statistic,
    ConfidenceResult, Method,
};
pub use mapping::{
    apply_map, apply_simple_map, eel_loglik, expansion_factor, invert_map, ExpansionSpec, Preimage, RayCoordinate,
};
pub use sample::Sample;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/domain.md")]
    mod domain {}
    #[doc = include_str!("../../../book/src/mapping.md")]
    mod mapping {}
    #[doc = include_str!("../../../book/src/calibration.md")]
    mod calibration {}
    #[doc = include_str!("../../../book/src/bartlett.md")]
    mod bartlett {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
}

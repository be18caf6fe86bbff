//! Robust dispersion inference based on the median absolute deviation (MAD).
//!
//! The crate provides:
//!
//! * order-statistic primitives ([`Sample`]: median, unscaled MAD, empirical
//!   quantiles);
//! * the FKML Generalized Lambda Distribution ([`GldParams`]) with a
//!   quantile-least-squares fitter, used as the density/distribution
//!   estimator behind the intervals;
//! * exact reference distributions ([`DistributionSpec`]) with population-MAD
//!   root finding;
//! * the asymptotic variance of the MAD estimator, its influence function,
//!   and partial influence functions of two-sample comparisons;
//! * confidence intervals for one MAD, a difference of MADs, and a squared
//!   ratio of MADs ([`ci_mad`], [`ci_diff_mads`], [`ci_ratio_sq_mads`]);
//! * a deterministic Monte-Carlo coverage harness ([`run_coverage`]).
//!
//! The MAD used throughout is the plain median of absolute deviations from
//! the median, with no consistency constant.

mod asv;
mod dist;
mod error;
mod gld;
mod intervals;
mod neldermead;
mod rootfind;
mod simulation;
mod special;
mod stats;

pub use asv::{
    asv_mad, asv_mad_estimated, asv_terms, asv_terms_exact, estimate_asv, if_mad,
    if_mad_with_terms, pif_curve, pif_diff, pif_ratio_sq, EstimatedAsv, MadAsvTerms, PifMeasure,
};
pub use dist::{true_diff, true_ratio_sq, DistributionSpec, ParseDistError};
pub use error::{Error, Group};
pub use gld::{fit_gld, GldFit, GldParams};
pub use intervals::{
    ci_diff_from_parts, ci_diff_mads, ci_mad, ci_mad_from_parts, ci_ratio_sq_from_parts,
    ci_ratio_sq_mads, ratio_sq_variance, ConfidenceInterval,
};
pub use simulation::{run_coverage, width_summary, CoverageSummary, Measure, SimulationPlan};
pub use special::{normal_cdf, normal_pdf, normal_quantile};
pub use stats::Sample;

//! Interval estimators: single MAD, difference of MADs, and squared ratio of
//! MADs (the last via a log transform, then exponentiated back).
//!
//! Two-sample variances follow the per-sample convention ASV_i / n_i.

use crate::asv::{estimate_asv, EstimatedAsv};
use crate::error::{Error, Group};
use crate::special::normal_quantile;
use crate::stats::Sample;

/// A two-sided confidence interval around a point estimate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ConfidenceInterval {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

fn z_for(level: f64) -> Result<f64, Error> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidProbability(level));
    }
    normal_quantile(0.5 + 0.5 * level)
}

/// Interval for a single MAD from precomputed parts:
/// estimate ± z * sqrt(asv / n).
pub fn ci_mad_from_parts(
    estimate: f64,
    asv: f64,
    n: usize,
    level: f64,
) -> Result<ConfidenceInterval, Error> {
    let z = z_for(level)?;
    let half = z * (asv / n as f64).sqrt();
    Ok(ConfidenceInterval {
        estimate,
        lower: estimate - half,
        upper: estimate + half,
        level,
    })
}

/// Interval for a difference of MADs from parts:
/// (mad1 - mad2) ± z * sqrt(asv1/n1 + asv2/n2).
pub fn ci_diff_from_parts(
    mad1: f64,
    asv1: f64,
    n1: usize,
    mad2: f64,
    asv2: f64,
    n2: usize,
    level: f64,
) -> Result<ConfidenceInterval, Error> {
    let z = z_for(level)?;
    let estimate = mad1 - mad2;
    let half = z * (asv1 / n1 as f64 + asv2 / n2 as f64).sqrt();
    Ok(ConfidenceInterval {
        estimate,
        lower: estimate - half,
        upper: estimate + half,
        level,
    })
}

/// Variance of the squared-ratio estimator at sample quantities:
/// 4 R [ asv1/(n1 mad2^2) + R asv2/(n2 mad2^2) ] with R = (mad1/mad2)^2.
pub fn ratio_sq_variance(
    mad1: f64,
    asv1: f64,
    n1: usize,
    mad2: f64,
    asv2: f64,
    n2: usize,
) -> f64 {
    let est = (mad1 / mad2) * (mad1 / mad2);
    let d2 = mad2 * mad2;
    4.0 * est * ((1.0 / d2) * asv1 / n1 as f64 + (est / d2) * asv2 / n2 as f64)
}

/// Interval for the squared ratio of MADs from parts, built on the log scale
/// and exponentiated back, so the lower bound is always positive.
pub fn ci_ratio_sq_from_parts(
    mad1: f64,
    asv1: f64,
    n1: usize,
    mad2: f64,
    asv2: f64,
    n2: usize,
    level: f64,
) -> Result<ConfidenceInterval, Error> {
    let z = z_for(level)?;
    if mad2 == 0.0 {
        return Err(Error::ZeroDenominatorMad);
    }
    let estimate = (mad1 / mad2) * (mad1 / mad2);
    let var = ratio_sq_variance(mad1, asv1, n1, mad2, asv2, n2);
    let half_log = z * (var / (estimate * estimate)).sqrt();
    let log_est = estimate.ln();
    Ok(ConfidenceInterval {
        estimate,
        lower: (log_est - half_log).exp(),
        upper: (log_est + half_log).exp(),
        level,
    })
}

fn estimate_group(sample: &Sample, which: Group) -> Result<(f64, EstimatedAsv), Error> {
    let mad = sample.mad().map_err(|e| e.in_group(which))?;
    let est = estimate_asv(sample).map_err(|e| e.in_group(which))?;
    Ok((mad, est))
}

/// Confidence interval for the MAD of one sample.
pub fn ci_mad(sample: &Sample, level: f64) -> Result<ConfidenceInterval, Error> {
    let mad = sample.mad()?;
    let est = estimate_asv(sample)?;
    ci_mad_from_parts(mad, est.asv, sample.len(), level)
}

/// Confidence interval for the difference of two samples' MADs.
pub fn ci_diff_mads(s1: &Sample, s2: &Sample, level: f64) -> Result<ConfidenceInterval, Error> {
    let (mad1, e1) = estimate_group(s1, Group::First)?;
    let (mad2, e2) = estimate_group(s2, Group::Second)?;
    ci_diff_from_parts(mad1, e1.asv, s1.len(), mad2, e2.asv, s2.len(), level)
}

/// Confidence interval for the squared ratio of two samples' MADs.
pub fn ci_ratio_sq_mads(s1: &Sample, s2: &Sample, level: f64) -> Result<ConfidenceInterval, Error> {
    let mad2 = s2.mad().map_err(|e| e.in_group(Group::Second))?;
    if mad2 == 0.0 {
        return Err(Error::ZeroDenominatorMad);
    }
    let (mad1, e1) = estimate_group(s1, Group::First)?;
    let e2 = estimate_asv(s2).map_err(|e| e.in_group(Group::Second))?;
    ci_ratio_sq_from_parts(mad1, e1.asv, s1.len(), mad2, e2.asv, s2.len(), level)
}

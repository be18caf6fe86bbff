//! Asymptotic variance of the MAD, the MAD influence function, and partial
//! influence functions of the difference and squared ratio of two MADs.
//!
//! The asymptotic variance is
//!
//! ```text
//! ASV = (1 / 4B1^2) * (1 + B2 / f(M)^2)
//! B1 = f(M - MAD) + f(M + MAD)
//! B3 = f(M - MAD) - f(M + MAD)
//! B2 = B3^2 + 4 B3 f(M) [1 - F(M + MAD) - F(M - MAD)]
//! ```
//!
//! The influence function of the MAD is the bounded step function
//!
//! ```text
//! IF(x) = [ sign(|x - M| - MAD) - ((f_hi - f_lo)/f(M)) sign(x - M) ] / (2 B1)
//! ```
//!
//! with sign(0) = 0, validated against a finite-difference contamination
//! oracle in the acceptance suite.

use crate::dist::{true_ratio_sq, DistributionSpec};
use crate::error::{Error, Group};
use crate::gld::{fit_gld, GldFit};
use crate::stats::Sample;

/// Intermediate quantities of the MAD asymptotic variance.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MadAsvTerms {
    pub median: f64,
    pub mad: f64,
    pub f_at_median: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub cdf_lo: f64,
    pub cdf_hi: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

/// Evaluates the ASV building blocks from a density, a CDF, a median and a
/// MAD. Fails with [`Error::AsvUndefined`] when f(M) <= 0 or B1 <= 0.
pub fn asv_terms<D, C>(pdf: D, cdf: C, median: f64, mad: f64) -> Result<MadAsvTerms, Error>
where
    D: Fn(f64) -> Result<f64, Error>,
    C: Fn(f64) -> Result<f64, Error>,
{
    if !(mad > 0.0) || !mad.is_finite() || !median.is_finite() {
        return Err(Error::AsvUndefined);
    }
    let f_lo = pdf(median - mad)?;
    let f_hi = pdf(median + mad)?;
    let f_at_median = pdf(median)?;
    let cdf_lo = cdf(median - mad)?;
    let cdf_hi = cdf(median + mad)?;
    let b1 = f_lo + f_hi;
    let b3 = f_lo - f_hi;
    let b2 = b3 * b3 + 4.0 * b3 * f_at_median * (1.0 - cdf_hi - cdf_lo);
    if f_at_median <= 0.0 || b1 <= 0.0 || !b1.is_finite() || !f_at_median.is_finite() {
        return Err(Error::AsvUndefined);
    }
    Ok(MadAsvTerms {
        median,
        mad,
        f_at_median,
        f_lo,
        f_hi,
        cdf_lo,
        cdf_hi,
        b1,
        b2,
        b3,
    })
}

/// ASV terms of a reference distribution at its exact median and MAD.
pub fn asv_terms_exact(d: &DistributionSpec) -> Result<MadAsvTerms, Error> {
    let median = d.quantile(0.5)?;
    let mad = d.true_mad()?;
    asv_terms(|x| d.pdf(x), |x| d.cdf(x), median, mad)
}

/// Asymptotic variance of the MAD estimator from its terms.
pub fn asv_mad(terms: &MadAsvTerms) -> f64 {
    (1.0 / (4.0 * terms.b1 * terms.b1)) * (1.0 + terms.b2 / (terms.f_at_median * terms.f_at_median))
}

/// An estimated ASV along with the GLD fit and terms it came from.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EstimatedAsv {
    pub asv: f64,
    pub terms: MadAsvTerms,
    pub fit: GldFit,
}

/// Fits a GLD to the sample and evaluates the ASV with the sample median,
/// sample MAD, and the fitted density and distribution functions.
pub fn estimate_asv(sample: &Sample) -> Result<EstimatedAsv, Error> {
    let fit = fit_gld(sample)?;
    let median = sample.median()?;
    let mad = sample.mad()?;
    let g = fit.params;
    let terms = asv_terms(|x| g.density(x), |x| g.cdf(x), median, mad)?;
    Ok(EstimatedAsv {
        asv: asv_mad(&terms),
        terms,
        fit,
    })
}

/// Estimated asymptotic variance of the MAD for a sample.
pub fn asv_mad_estimated(sample: &Sample) -> Result<f64, Error> {
    estimate_asv(sample).map(|e| e.asv)
}

/// sign with sign(0) = 0, unlike `f64::signum`.
fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// MAD influence function at `x` given precomputed terms.
pub fn if_mad_with_terms(x: f64, terms: &MadAsvTerms) -> f64 {
    let s_dev = sign((x - terms.median).abs() - terms.mad);
    let s_med = sign(x - terms.median);
    let skew = (terms.f_hi - terms.f_lo) / terms.f_at_median;
    (s_dev - skew * s_med) / (2.0 * terms.b1)
}

/// MAD influence function at `x` for a reference distribution.
pub fn if_mad(x: f64, d: &DistributionSpec) -> Result<f64, Error> {
    Ok(if_mad_with_terms(x, &asv_terms_exact(d)?))
}

/// Partial influence function of the squared ratio of MADs when population
/// `which` is contaminated at `x`.
pub fn pif_ratio_sq(
    x: f64,
    d1: &DistributionSpec,
    d2: &DistributionSpec,
    which: Group,
) -> Result<f64, Error> {
    let t1 = asv_terms_exact(d1)?;
    let t2 = asv_terms_exact(d2)?;
    let ratio = (t1.mad / t2.mad) * (t1.mad / t2.mad);
    Ok(match which {
        Group::First => 2.0 * ratio / t1.mad * if_mad_with_terms(x, &t1),
        Group::Second => -2.0 * ratio / t2.mad * if_mad_with_terms(x, &t2),
    })
}

/// Partial influence function of the difference of MADs when population
/// `which` is contaminated at `x`.
pub fn pif_diff(
    x: f64,
    d1: &DistributionSpec,
    d2: &DistributionSpec,
    which: Group,
) -> Result<f64, Error> {
    Ok(match which {
        Group::First => if_mad(x, d1)?,
        Group::Second => -if_mad(x, d2)?,
    })
}

/// Two-population dispersion comparison measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PifMeasure {
    RatioSq,
    Diff,
}

/// Tabulates the first partial influence function over an inclusive x-grid.
///
/// Returns (x, PIF1(x)) pairs; an empty grid (from > to or step <= 0) yields
/// an empty sequence.
pub fn pif_curve(
    d1: &DistributionSpec,
    d2: &DistributionSpec,
    measure: PifMeasure,
    from: f64,
    to: f64,
    step: f64,
) -> Result<Vec<(f64, f64)>, Error> {
    if !(step > 0.0) || from > to || !from.is_finite() || !to.is_finite() {
        return Ok(Vec::new());
    }
    let t1 = asv_terms_exact(d1)?;
    let scale = match measure {
        PifMeasure::RatioSq => {
            let r = true_ratio_sq(d1, d2)?;
            2.0 * r / t1.mad
        }
        PifMeasure::Diff => 1.0,
    };
    let points = ((to - from) / step + 1e-9).floor() as usize + 1;
    let mut out = Vec::with_capacity(points);
    for i in 0..points {
        let x = from + i as f64 * step;
        out.push((x, scale * if_mad_with_terms(x, &t1)));
    }
    Ok(out)
}

//! Order-statistic primitives: sample median, sample MAD, empirical quantiles.

use crate::error::Error;

/// One group of finite real observations.
///
/// The MAD here is the plain median of absolute residuals from the sample
/// median — it carries no 1.4826 consistency constant, unlike the scaled
/// default of many statistics libraries.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    /// Builds a sample, rejecting non-finite values.
    pub fn new(values: Vec<f64>) -> Result<Self, Error> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput(bad));
        }
        Ok(Sample { values })
    }

    /// Builds a sample by dropping non-finite entries (missing-value
    /// semantics), returning how many were dropped.
    pub fn from_filtered<I: IntoIterator<Item = f64>>(values: I) -> (Self, usize) {
        let mut kept = Vec::new();
        let mut dropped = 0;
        for v in values {
            if v.is_finite() {
                kept.push(v);
            } else {
                dropped += 1;
            }
        }
        (Sample { values: kept }, dropped)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample median; for even n the midpoint of the two central order
    /// statistics.
    pub fn median(&self) -> Result<f64, Error> {
        if self.values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut sorted = self.values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(median_of_sorted(&sorted))
    }

    /// Sample MAD: median of |x_i - median|, unscaled.
    pub fn mad(&self) -> Result<f64, Error> {
        let m = self.median()?;
        let mut devs: Vec<f64> = self.values.iter().map(|x| (x - m).abs()).collect();
        devs.sort_unstable_by(f64::total_cmp);
        Ok(median_of_sorted(&devs))
    }

    /// Empirical quantile with linear interpolation at rank (n-1)p + 1, the
    /// convention whose p = 0.5 case agrees with [`Sample::median`].
    pub fn quantile(&self, p: f64) -> Result<f64, Error> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidProbability(p));
        }
        if self.values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut sorted = self.values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(quantile_of_sorted(&sorted, p))
    }
}

/// Median of an already-sorted nonempty slice: the middle order statistic for
/// odd n, the midpoint of the two central ones for even n. Shares the
/// interpolation path with [`quantile_of_sorted`] so that quantile(0.5) and
/// median agree bit-for-bit.
pub(crate) fn median_of_sorted(sorted: &[f64]) -> f64 {
    quantile_of_sorted(sorted, 0.5)
}

/// Interpolated quantile of an already-sorted nonempty slice.
pub(crate) fn quantile_of_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    debug_assert!(n > 0);
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 >= n || frac == 0.0 {
        sorted[lo.min(n - 1)]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

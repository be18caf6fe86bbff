//! Monte-Carlo coverage harness: simulated coverage probability and interval
//! width summaries for the three interval estimators.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dist::{true_diff, true_ratio_sq, DistributionSpec};
use crate::error::Error;
use crate::intervals::{ci_diff_mads, ci_mad, ci_ratio_sq_mads};
use crate::stats::median_of_sorted;

/// Which dispersion comparison a plan simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Mad,
    RatioSq,
    Diff,
}

impl Measure {
    pub fn is_two_sample(&self) -> bool {
        matches!(self, Measure::RatioSq | Measure::Diff)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Mad => write!(f, "mad"),
            Measure::RatioSq => write!(f, "ratio-sq"),
            Measure::Diff => write!(f, "diff"),
        }
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mad" => Ok(Measure::Mad),
            "ratio-sq" | "ratio_sq" | "ratiosq" => Ok(Measure::RatioSq),
            "diff" => Ok(Measure::Diff),
            other => Err(format!("unknown measure '{other}' (mad | ratio-sq | diff)")),
        }
    }
}

/// Full description of one coverage simulation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SimulationPlan {
    pub dist1: DistributionSpec,
    pub dist2: Option<DistributionSpec>,
    pub measure: Measure,
    pub n1: usize,
    pub n2: Option<usize>,
    pub trials: usize,
    pub level: f64,
    pub seed: u64,
}

impl SimulationPlan {
    fn validate(&self) -> Result<(), Error> {
        if self.trials == 0 || self.n1 == 0 {
            return Err(Error::EmptyInput);
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidProbability(self.level));
        }
        if self.measure.is_two_sample() && (self.dist2.is_none() || self.n2.is_none()) {
            return Err(Error::EmptyInput);
        }
        Ok(())
    }
}

/// Aggregated result of a coverage simulation.
///
/// Coverage is computed over successful trials only; trials whose interval
/// construction failed are counted in `failed_trials`, never dropped
/// silently.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CoverageSummary {
    pub coverage: f64,
    pub mean_width: f64,
    pub median_width: f64,
    /// Set when the mean width exceeds five times the median width, the
    /// report-an-asterisk convention for heavy-tailed width distributions.
    pub heavy_tail: bool,
    pub failed_trials: usize,
    pub truth: f64,
}

/// Mean and median of a nonempty width sequence.
pub fn width_summary(widths: &[f64]) -> Result<(f64, f64), Error> {
    if widths.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mean = widths.iter().sum::<f64>() / widths.len() as f64;
    let mut sorted = widths.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok((mean, median_of_sorted(&sorted)))
}

const HEAVY_TAIL_FACTOR: f64 = 5.0;

/// SplitMix64 finalizer; the per-trial seeding hash.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the stream seed for (plan seed, trial index, group index) as a
/// pure function, so trials are independent of worker count and order.
fn trial_seed(seed: u64, trial: u64, group: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(trial.wrapping_add(1))) ^ group)
}

/// Runs the plan and aggregates coverage of the truth and interval widths.
///
/// Trials are embarrassingly parallel; summaries are identical for any
/// worker count because per-trial seeds are derived from the trial index and
/// aggregation happens over the order-preserved trial results.
pub fn run_coverage(plan: &SimulationPlan) -> Result<CoverageSummary, Error> {
    plan.validate()?;
    let truth = match plan.measure {
        Measure::Mad => plan.dist1.true_mad()?,
        Measure::RatioSq => true_ratio_sq(&plan.dist1, plan.dist2.as_ref().unwrap())?,
        Measure::Diff => true_diff(&plan.dist1, plan.dist2.as_ref().unwrap())?,
    };

    let outcomes: Vec<Option<(bool, f64)>> = (0..plan.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(plan, t, truth).ok())
        .collect();

    let mut failed = 0usize;
    let mut hits = 0usize;
    let mut widths = Vec::with_capacity(plan.trials);
    for outcome in outcomes {
        match outcome {
            Some((hit, width)) => {
                if hit {
                    hits += 1;
                }
                widths.push(width);
            }
            None => failed += 1,
        }
    }
    let (mean_width, median_width) = width_summary(&widths)?;
    Ok(CoverageSummary {
        coverage: hits as f64 / widths.len() as f64,
        mean_width,
        median_width,
        heavy_tail: mean_width > HEAVY_TAIL_FACTOR * median_width,
        failed_trials: failed,
        truth,
    })
}

fn run_trial(plan: &SimulationPlan, t: u64, truth: f64) -> Result<(bool, f64), Error> {
    let s1 = plan.dist1.sample(plan.n1, trial_seed(plan.seed, t, 0))?;
    let interval = match plan.measure {
        Measure::Mad => ci_mad(&s1, plan.level)?,
        Measure::RatioSq | Measure::Diff => {
            let d2 = plan.dist2.as_ref().unwrap();
            let n2 = plan.n2.unwrap();
            let s2 = d2.sample(n2, trial_seed(plan.seed, t, 1))?;
            match plan.measure {
                Measure::RatioSq => ci_ratio_sq_mads(&s1, &s2, plan.level)?,
                _ => ci_diff_mads(&s1, &s2, plan.level)?,
            }
        }
    };
    let hit = interval.lower <= truth && truth <= interval.upper;
    Ok((hit, interval.upper - interval.lower))
}

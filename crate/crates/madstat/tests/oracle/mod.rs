//! Finite-difference contamination oracle for the partial influence
//! functions: exact mixture CDFs plus bisection root-finding, independent of
//! the influence-function implementation under test.

use madstat::{DistributionSpec, Group};

const EPS: f64 = 1e-6;
const TOL: f64 = 1e-10;

/// CDF of (1 - eps) F + eps * point mass at `at`.
fn mixture_cdf(d: &DistributionSpec, at: f64, eps: f64, x: f64) -> f64 {
    (1.0 - eps) * d.cdf(x).unwrap() + eps * f64::from(x >= at)
}

fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    assert!(f(lo) <= 0.0 && f(hi) >= 0.0, "oracle root not bracketed");
    while hi - lo > TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Median of the contaminated distribution.
fn mixture_median(d: &DistributionSpec, at: f64, eps: f64) -> f64 {
    let lo = d.quantile(0.4).unwrap();
    let hi = d.quantile(0.6).unwrap();
    bisect(|m| mixture_cdf(d, at, eps, m) - 0.5, lo, hi)
}

/// MAD of the contaminated distribution.
fn mixture_mad(d: &DistributionSpec, at: f64, eps: f64) -> f64 {
    let m = mixture_median(d, at, eps);
    let mut hi = d.quantile(0.999).unwrap() - d.quantile(0.001).unwrap();
    let g = |a: f64| mixture_cdf(d, at, eps, m + a) - mixture_cdf(d, at, eps, m - a) - 0.5;
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    bisect(g, 0.0, hi)
}

/// [R(F_eps, F2) - R(F1, F2)] / eps with contamination at `x` in `which`.
pub fn fd_pif_ratio_sq(
    d1: &DistributionSpec,
    d2: &DistributionSpec,
    x: f64,
    which: Group,
) -> f64 {
    let base1 = mixture_mad(d1, x, 0.0);
    let base2 = mixture_mad(d2, x, 0.0);
    let (m1, m2) = match which {
        Group::First => (mixture_mad(d1, x, EPS), base2),
        Group::Second => (base1, mixture_mad(d2, x, EPS)),
    };
    ((m1 / m2).powi(2) - (base1 / base2).powi(2)) / EPS
}

/// [D(F_eps, F2) - D(F1, F2)] / eps with contamination at `x` in `which`.
pub fn fd_pif_diff(d1: &DistributionSpec, d2: &DistributionSpec, x: f64, which: Group) -> f64 {
    match which {
        Group::First => (mixture_mad(d1, x, EPS) - mixture_mad(d1, x, 0.0)) / EPS,
        Group::Second => -(mixture_mad(d2, x, EPS) - mixture_mad(d2, x, 0.0)) / EPS,
    }
}

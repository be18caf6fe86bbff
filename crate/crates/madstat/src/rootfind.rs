//! Bracketed bisection used for quantile inversion and population-MAD roots.

use crate::error::Error;

pub(crate) const ROOT_TOL: f64 = 1e-10;

/// Bisection on a nondecreasing-crossing function: requires f(lo) <= 0 <= f(hi).
///
/// Returns the interval midpoint once the bracket width drops below `tol`.
pub(crate) fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64, Error>
where
    F: FnMut(f64) -> f64,
{
    let flo = f(lo);
    let fhi = f(hi);
    if flo > 0.0 || fhi < 0.0 || flo.is_nan() || fhi.is_nan() {
        return Err(Error::RootFindFailure("root not bracketed"));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Doubles `hi` until `f(hi) >= 0`, then bisects on `[lo, hi]`.
pub(crate) fn bisect_expanding<F>(mut f: F, lo: f64, hi0: f64, tol: f64) -> Result<f64, Error>
where
    F: FnMut(f64) -> f64,
{
    let mut hi = hi0;
    let mut expansions = 0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 || !hi.is_finite() {
            return Err(Error::RootFindFailure("upper bracket expansion failed"));
        }
    }
    bisect(f, lo, hi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-11);
    }

    #[test]
    fn rejects_non_bracketing_interval() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn expands_bracket_upward() {
        let r = bisect_expanding(|x| x - 37.5, 0.0, 1.0, 1e-12).unwrap();
        assert!((r - 37.5).abs() < 1e-10);
    }
}

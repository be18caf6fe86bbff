//! Error types shared across the crate.

use std::fmt;

/// Which of the two samples (or populations) an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    First,
    Second,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::First => write!(f, "first"),
            Group::Second => write!(f, "second"),
        }
    }
}

/// Errors produced by estimators, fitters and the simulation harness.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An estimator was invoked on an empty sample or empty input sequence.
    EmptyInput,
    /// A probability argument fell outside its valid range.
    InvalidProbability(f64),
    /// A non-finite value (NaN or infinity) reached a numeric routine.
    NonFiniteInput(f64),
    /// Fewer observations than the operation requires.
    InsufficientData { got: usize, required: usize },
    /// The sample MAD is zero, so scale-based estimation is impossible.
    DegenerateSample,
    /// No Nelder-Mead start converged to a usable parameter set.
    FitFailure,
    /// Eq.-style asymptotic variance terms are undefined (zero density at the
    /// median or zero B1).
    AsvUndefined,
    /// A bracketed root search failed to enclose or converge on a root.
    RootFindFailure(&'static str),
    /// The denominator MAD of a squared ratio is zero.
    ZeroDenominatorMad,
    /// An error raised while processing one of two samples, tagged with the
    /// sample it came from.
    Group { which: Group, source: Box<Error> },
}

impl Error {
    /// Wraps `self` with the sample tag used by the two-sample intervals.
    pub(crate) fn in_group(self, which: Group) -> Error {
        Error::Group {
            which,
            source: Box::new(self),
        }
    }

    /// Short machine-readable code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyInput => "empty-input",
            Error::InvalidProbability(_) => "invalid-probability",
            Error::NonFiniteInput(_) => "non-finite-input",
            Error::InsufficientData { .. } => "insufficient-data",
            Error::DegenerateSample => "degenerate-sample",
            Error::FitFailure => "fit-failure",
            Error::AsvUndefined => "asv-undefined",
            Error::RootFindFailure(_) => "root-find-failure",
            Error::ZeroDenominatorMad => "zero-denominator-mad",
            Error::Group { source, .. } => source.code(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInput => write!(f, "empty input"),
            Error::InvalidProbability(p) => write!(f, "probability {p} outside valid range"),
            Error::NonFiniteInput(x) => write!(f, "non-finite input value {x}"),
            Error::InsufficientData { got, required } => {
                write!(f, "need at least {required} observations, got {got}")
            }
            Error::DegenerateSample => write!(f, "sample MAD is zero"),
            Error::FitFailure => write!(f, "GLD fit did not converge from any start"),
            Error::AsvUndefined => write!(f, "asymptotic variance undefined (zero density terms)"),
            Error::RootFindFailure(what) => write!(f, "root finding failed: {what}"),
            Error::ZeroDenominatorMad => write!(f, "denominator MAD is zero"),
            Error::Group { which, source } => write!(f, "{which} sample: {source}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Group { source, .. } => Some(source),
            _ => None,
        }
    }
}

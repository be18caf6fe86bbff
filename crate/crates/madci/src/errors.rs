//! CLI error type with stable machine-readable codes and exit statuses.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Error bubbled up from the statistics library.
    Stat(madstat::Error),
    /// More than two group labels in the input data.
    TooManyGroups(usize),
    /// A named column is missing, or a label/flag value does not resolve.
    Schema(String),
    /// Bad flag or config value.
    BadValue(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Stat(e) => e.code(),
            CliError::TooManyGroups(_) => "too-many-groups",
            CliError::Schema(_) => "schema-error",
            CliError::BadValue(_) => "bad-value",
            CliError::Io(_) => "io-error",
        }
    }

    /// Distinct process exit status per error kind.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Stat(e) => match unwrap_group(e) {
                madstat::Error::EmptyInput => 3,
                madstat::Error::InvalidProbability(_) => 4,
                madstat::Error::NonFiniteInput(_) => 5,
                madstat::Error::InsufficientData { .. } => 6,
                madstat::Error::DegenerateSample => 7,
                madstat::Error::FitFailure => 8,
                madstat::Error::AsvUndefined => 9,
                madstat::Error::RootFindFailure(_) => 10,
                madstat::Error::ZeroDenominatorMad => 11,
                madstat::Error::Group { .. } => unreachable!(),
            },
            CliError::TooManyGroups(_) => 12,
            CliError::Schema(_) => 13,
            CliError::BadValue(_) => 14,
            CliError::Io(_) => 15,
        }
    }
}

fn unwrap_group(e: &madstat::Error) -> &madstat::Error {
    match e {
        madstat::Error::Group { source, .. } => unwrap_group(source),
        other => other,
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Stat(e) => write!(f, "{e}"),
            CliError::TooManyGroups(n) => {
                write!(f, "input has {n} group labels; at most 2 are supported")
            }
            CliError::Schema(msg) => write!(f, "{msg}"),
            CliError::BadValue(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<madstat::Error> for CliError {
    fn from(e: madstat::Error) -> Self {
        CliError::Stat(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

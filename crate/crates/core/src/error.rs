//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Broad failure classes, used by front-ends to pick an exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad parameters supplied by the caller (K grid, level, DGP fields).
    Usage,
    /// Input files that are missing, unreadable or do not match the schema.
    Data,
    /// The numerical problem itself has no usable answer.
    Numerical,
}

#[derive(Debug, Error)]
pub enum TaolsError {
    #[error("series has {len} observations, at least {min} required")]
    SeriesTooShort { len: usize, min: usize },

    #[error("series contains a non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("series are misaligned: {0}")]
    Misaligned(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing required column `{0}` in header")]
    MissingColumn(String),

    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },

    #[error("non-numeric value `{value}` in column `{column}` at line {line}")]
    NonNumeric { line: u64, column: String, value: String },

    #[error("year {year} is missing from column `{column}`")]
    YearGap { year: i64, column: String },

    #[error("year ranges of forcing and temperature do not overlap")]
    EmptyIntersection,

    #[error("{quantity} must be positive, got {value}")]
    Domain { quantity: &'static str, value: f64 },

    #[error("basis index must be at least 1, got {0}")]
    BasisIndex(usize),

    #[error("basis argument {0} lies outside [0, 1]")]
    BasisArgument(f64),

    #[error("K = {k} exceeds the series length T = {t}")]
    OverResolution { k: usize, t: usize },

    #[error("K = {k} leaves no residual degrees of freedom (need K >= {min})")]
    InsufficientK { k: usize, min: usize },

    #[error("invalid K grid: {0}")]
    InvalidGrid(String),

    #[error("design matrix is rank deficient: column `{column}` is collinear with earlier columns")]
    SingularDesign { column: &'static str },

    #[error("non-physical {quantity}: {value}")]
    NonPhysical { quantity: &'static str, value: f64 },

    #[error("unknown coefficient `{0}` (expected gamma, mu, lambda, phi or delta)")]
    UnknownCoefficient(String),

    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),

    #[error("invalid simulation spec: {0}")]
    InvalidSpec(String),
}

impl TaolsError {
    pub fn class(&self) -> ErrorClass {
        use TaolsError::*;
        match self {
            Io { .. }
            | MissingColumn(_)
            | MalformedRow { .. }
            | NonNumeric { .. }
            | YearGap { .. }
            | EmptyIntersection
            | SeriesTooShort { .. }
            | NonFinite { .. }
            | Misaligned(_) => ErrorClass::Data,
            SingularDesign { .. } | NonPhysical { .. } => ErrorClass::Numerical,
            Domain { .. }
            | BasisIndex(_)
            | BasisArgument(_)
            | OverResolution { .. }
            | InsufficientK { .. }
            | InvalidGrid(_)
            | UnknownCoefficient(_)
            | InvalidLevel(_)
            | InvalidSpec(_) => ErrorClass::Usage,
        }
    }
}

pub type Result<T> = std::result::Result<T, TaolsError>;

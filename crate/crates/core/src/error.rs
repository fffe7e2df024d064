use thiserror::Error;

use crate::exact::Ratio;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An intermediate integer exceeded the 128-bit range.
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("ratio components must be strictly positive (got {num}/{den})")]
    NonPositive { num: i128, den: i128 },
    #[error("cannot parse {0:?} as a ratio")]
    Parse(String),
    #[error("invalid prime restriction: {0}")]
    InvalidRestriction(String),
    #[error("{0} lies outside the diapason [1, 2]")]
    OutsideDiapason(Ratio),
    #[error("tones must be strictly increasing")]
    Unordered,
    #[error("operation needs at least {needed} tones, got {got}")]
    TooFewTones { needed: usize, got: usize },
    #[error("unknown scale {0:?}")]
    UnknownScale(String),
    #[error("unknown mean kind {0:?} (expected A, G or H)")]
    UnknownKind(String),
    #[error("{0} is not {{2,3,5}}-smooth")]
    NotSmooth(Ratio),
    #[error("expected a positive real, got {0}")]
    NotPositiveReal(f64),
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
}

//! Arithmetic, geometric and harmonic means of two positive ratios, the
//! matching proportion predicates, and the length/frequency model of a
//! vibrating string.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{exact_sqrt, Ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MeanKind {
    #[serde(rename = "A")]
    Arithmetic,
    #[serde(rename = "G")]
    Geometric,
    #[serde(rename = "H")]
    Harmonic,
}

impl MeanKind {
    pub const ALL: [MeanKind; 3] = [MeanKind::Arithmetic, MeanKind::Geometric, MeanKind::Harmonic];

    /// One-letter code used in flags and serialized traces.
    pub fn code(self) -> char {
        match self {
            MeanKind::Arithmetic => 'A',
            MeanKind::Geometric => 'G',
            MeanKind::Harmonic => 'H',
        }
    }

    /// The exact mean of `a` and `b`, or `None` for an irrational geometric mean.
    pub fn exact_mean(self, a: &Ratio, b: &Ratio) -> Result<Option<Ratio>> {
        match self {
            MeanKind::Arithmetic => mean_arithmetic(a, b).map(Some),
            MeanKind::Harmonic => mean_harmonic(a, b).map(Some),
            MeanKind::Geometric => mean_geometric(a, b).map(|g| g.exact),
        }
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl FromStr for MeanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<MeanKind> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" | "ARITHMETIC" => Ok(MeanKind::Arithmetic),
            "G" | "GEOMETRIC" => Ok(MeanKind::Geometric),
            "H" | "HARMONIC" => Ok(MeanKind::Harmonic),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

/// `(a + b) / 2`
pub fn mean_arithmetic(a: &Ratio, b: &Ratio) -> Result<Ratio> {
    a.checked_add(b)?.checked_div(&Ratio::TWO)
}

/// `2ab / (a + b)`
pub fn mean_harmonic(a: &Ratio, b: &Ratio) -> Result<Ratio> {
    a.checked_mul(b)?
        .checked_mul(&Ratio::TWO)?
        .checked_div(&a.checked_add(b)?)
}

/// A geometric mean: exact when `a·b` is a rational square, always approximated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricMean {
    pub exact: Option<Ratio>,
    pub approx: f64,
}

pub fn mean_geometric(a: &Ratio, b: &Ratio) -> Result<GeometricMean> {
    let product = a.checked_mul(b)?;
    Ok(GeometricMean {
        exact: exact_sqrt(&product),
        approx: (a.to_f64() * b.to_f64()).sqrt(),
    })
}

/// Whether `a, m, b` form a proportion of the given kind. Exact in every case;
/// the geometric test is `m² = a·b`.
pub fn is_proportion(a: &Ratio, m: &Ratio, b: &Ratio, kind: MeanKind) -> Result<bool> {
    Ok(match kind {
        MeanKind::Arithmetic => m.checked_mul(&Ratio::TWO)? == a.checked_add(b)?,
        MeanKind::Geometric => m.checked_mul(m)? == a.checked_mul(b)?,
        MeanKind::Harmonic => *m == mean_harmonic(a, b)?,
    })
}

/// Frequency is inversely proportional to string length: `ν = κ / ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StringModel {
    kappa: Ratio,
}

impl StringModel {
    pub fn new(kappa: Ratio) -> StringModel {
        StringModel { kappa }
    }

    pub fn kappa(&self) -> Ratio {
        self.kappa
    }

    pub fn frequency_of_length(&self, length: &Ratio) -> Result<Ratio> {
        self.kappa.checked_div(length)
    }

    /// The string of harmonic-mean length sounds the arithmetic mean of the two
    /// frequencies. Always true; this evaluates both sides.
    pub fn duality_check(&self, a: &Ratio, b: &Ratio) -> Result<bool> {
        let lhs = self.frequency_of_length(&mean_harmonic(a, b)?)?;
        let rhs = mean_arithmetic(&self.frequency_of_length(a)?, &self.frequency_of_length(b)?)?;
        Ok(lhs == rhs)
    }
}

impl Default for StringModel {
    fn default() -> Self {
        StringModel::new(Ratio::ONE)
    }
}

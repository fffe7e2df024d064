//! Pitch classes in the normalized diapason [1, 2], the fixed scales
//! (tetractys consonances, Pythagorean, natural, the two mean closures,
//! finales, natural hexachord), generation by stacked fifths, the fifths
//! spiral, and equal temperament.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{r, Ratio};

/// A tone in the closed diapason `[1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Ratio", into = "Ratio")]
pub struct PitchClass(Ratio);

impl PitchClass {
    pub const UNISON: PitchClass = PitchClass(Ratio::ONE);
    pub const DIAPASON: PitchClass = PitchClass(Ratio::TWO);

    pub fn new(value: Ratio) -> Result<PitchClass> {
        if value < Ratio::ONE || value > Ratio::TWO {
            return Err(Error::OutsideDiapason(value));
        }
        Ok(PitchClass(value))
    }

    pub fn value(&self) -> Ratio {
        self.0
    }

    pub fn cents(&self) -> f64 {
        self.0.cents()
    }

    /// Equality up to whole diapasons: 1 and 2 are the same class.
    pub fn same_class(&self, other: &PitchClass) -> bool {
        self.folded() == other.folded()
    }

    fn folded(&self) -> Ratio {
        if self.0 == Ratio::TWO {
            Ratio::ONE
        } else {
            self.0
        }
    }
}

impl TryFrom<Ratio> for PitchClass {
    type Error = Error;

    fn try_from(value: Ratio) -> Result<Self> {
        PitchClass::new(value)
    }
}

impl From<PitchClass> for Ratio {
    fn from(p: PitchClass) -> Ratio {
        p.0
    }
}

impl fmt::Display for PitchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Folds `r` into `[1, 2)` by whole diapasons. An input of exactly 2 is kept
/// as the closing tone rather than folded to 1.
pub fn reduce_to_diapason(r: &Ratio) -> Result<PitchClass> {
    if *r == Ratio::TWO {
        return Ok(PitchClass::DIAPASON);
    }
    let mut x = *r;
    while x >= Ratio::TWO {
        x = x.checked_div(&Ratio::TWO)?;
    }
    while x < Ratio::ONE {
        x = x.checked_mul(&Ratio::TWO)?;
    }
    Ok(PitchClass(x))
}

/// An ordered, duplicate-free set of pitch classes with a display name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScaleRepr")]
pub struct Scale {
    name: String,
    tones: Vec<PitchClass>,
}

#[derive(Deserialize)]
struct ScaleRepr {
    name: String,
    tones: Vec<PitchClass>,
}

impl TryFrom<ScaleRepr> for Scale {
    type Error = Error;

    fn try_from(repr: ScaleRepr) -> Result<Self> {
        Scale::new(repr.name, repr.tones)
    }
}

impl Scale {
    /// Tones must already be strictly increasing.
    pub fn new(name: impl Into<String>, tones: Vec<PitchClass>) -> Result<Scale> {
        if tones.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Unordered);
        }
        Ok(Scale {
            name: name.into(),
            tones,
        })
    }

    /// Sorts and deduplicates; every ratio must lie in `[1, 2]`.
    pub fn from_ratios<I: IntoIterator<Item = Ratio>>(name: impl Into<String>, ratios: I) -> Result<Scale> {
        let set = ratios
            .into_iter()
            .map(PitchClass::new)
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Scale {
            name: name.into(),
            tones: set.into_iter().collect(),
        })
    }

    pub fn from_set(name: impl Into<String>, set: BTreeSet<PitchClass>) -> Scale {
        Scale {
            name: name.into(),
            tones: set.into_iter().collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Scale {
        self.name = name.into();
        self
    }

    pub fn tones(&self) -> &[PitchClass] {
        &self.tones
    }

    pub fn ratios(&self) -> Vec<Ratio> {
        self.tones.iter().map(PitchClass::value).collect()
    }

    pub fn len(&self) -> usize {
        self.tones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tones.is_empty()
    }

    pub fn contains(&self, tone: &Ratio) -> bool {
        self.tones.binary_search_by(|t| t.value().cmp(tone)).is_ok()
    }

    /// Membership up to whole diapasons.
    pub fn contains_class(&self, tone: &PitchClass) -> bool {
        self.tones.iter().any(|t| t.same_class(tone))
    }

    /// Starts on 1 and ends on 2.
    pub fn is_closed(&self) -> bool {
        self.tones.first() == Some(&PitchClass::UNISON) && self.tones.last() == Some(&PitchClass::DIAPASON)
    }

    pub fn to_set(&self) -> BTreeSet<PitchClass> {
        self.tones.iter().copied().collect()
    }
}

/// Ratios between consecutive tones.
pub fn step_intervals(scale: &Scale) -> Result<Vec<Ratio>> {
    if scale.len() < 2 {
        return Err(Error::TooFewTones {
            needed: 2,
            got: scale.len(),
        });
    }
    scale
        .tones()
        .windows(2)
        .map(|w| w[1].value().checked_div(&w[0].value()))
        .collect()
}

/// The named constant sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CanonicalScale {
    /// The four consonances 1, 4/3, 3/2, 2.
    T,
    /// Consonances from dividing the string into at most five parts.
    T5,
    Pythagorean,
    Natural,
    /// Mean closure of `T` under the 5-limit.
    Sn1,
    /// Mean closure of the natural scale under the 5-limit.
    Sn2,
    /// The four modal finales in Pythagorean intonation.
    Finales,
    HexachordNatural,
}

impl CanonicalScale {
    pub const ALL: [CanonicalScale; 8] = [
        CanonicalScale::T,
        CanonicalScale::T5,
        CanonicalScale::Pythagorean,
        CanonicalScale::Natural,
        CanonicalScale::Sn1,
        CanonicalScale::Sn2,
        CanonicalScale::Finales,
        CanonicalScale::HexachordNatural,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CanonicalScale::T => "T",
            CanonicalScale::T5 => "T5",
            CanonicalScale::Pythagorean => "PYTHAGOREAN",
            CanonicalScale::Natural => "NATURAL",
            CanonicalScale::Sn1 => "SN1",
            CanonicalScale::Sn2 => "SN2",
            CanonicalScale::Finales => "FINALES",
            CanonicalScale::HexachordNatural => "HEXACHORD_NATURAL",
        }
    }

    fn ratios(self) -> &'static [(u128, u128)] {
        match self {
            CanonicalScale::T => &[(1, 1), (4, 3), (3, 2), (2, 1)],
            CanonicalScale::T5 => &[(1, 1), (5, 4), (4, 3), (3, 2), (5, 3), (2, 1)],
            CanonicalScale::Pythagorean => &[(1, 1), (9, 8), (81, 64), (4, 3), (3, 2), (27, 16), (243, 128), (2, 1)],
            CanonicalScale::Natural => &[(1, 1), (9, 8), (5, 4), (4, 3), (3, 2), (5, 3), (15, 8), (2, 1)],
            CanonicalScale::Sn1 => &[
                (1, 1),
                (9, 8),
                (5, 4),
                (81, 64),
                (4, 3),
                (45, 32),
                (3, 2),
                (25, 16),
                (5, 3),
                (2, 1),
            ],
            CanonicalScale::Sn2 => &[
                (1, 1),
                (9, 8),
                (5, 4),
                (81, 64),
                (4, 3),
                (45, 32),
                (3, 2),
                (25, 16),
                (5, 3),
                (27, 16),
                (15, 8),
                (2, 1),
            ],
            CanonicalScale::Finales => &[(9, 8), (81, 64), (4, 3), (3, 2)],
            CanonicalScale::HexachordNatural => &[(1, 1), (9, 8), (5, 4), (4, 3), (3, 2), (5, 3)],
        }
    }

    pub fn scale(self) -> Scale {
        let tones = self.ratios().iter().map(|&(n, d)| PitchClass(r(n, d))).collect();
        Scale::new(self.id(), tones).expect("constant scales are sorted")
    }
}

impl FromStr for CanonicalScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase();
        CanonicalScale::ALL
            .into_iter()
            .find(|c| c.id() == key)
            .ok_or_else(|| Error::UnknownScale(s.to_string()))
    }
}

impl fmt::Display for CanonicalScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

pub fn canonical(name: &str) -> Result<Scale> {
    Ok(name.parse::<CanonicalScale>()?.scale())
}

/// Adds `steps` tones to `seed`, each a diapente above the previous one and
/// folded into the diapason, starting from `start`.
pub fn diapente_chain(seed: &Scale, start: &Ratio, steps: usize) -> Result<Scale> {
    let mut tones = seed.to_set();
    let mut current = *start;
    for _ in 0..steps {
        let next = reduce_to_diapason(&current.checked_mul(&Ratio::FIFTH)?)?;
        tones.insert(next);
        current = next.value();
    }
    Ok(Scale::from_set(format!("pythagorean:steps={steps}"), tones))
}

/// The consonances `T` extended by `steps` successive fifths above 3/2.
/// Four steps give the Pythagorean scale.
pub fn pythagorean_by_diapente(steps: usize) -> Result<Scale> {
    diapente_chain(&CanonicalScale::T.scale(), &Ratio::FIFTH, steps)
}

/// A tone of the fifths spiral: `step` fifths up (positive) or down (negative).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpiralTone {
    pub step: i32,
    pub tone: PitchClass,
}

/// Tones `(3/2)^k` for `k` in `-down..=up`, folded into the diapason, ordered by `k`.
pub fn fifths_spiral(up: u32, down: u32) -> Result<Vec<SpiralTone>> {
    let lo = -i32::try_from(down).map_err(|_| Error::Overflow)?;
    let hi = i32::try_from(up).map_err(|_| Error::Overflow)?;
    (lo..=hi)
        .map(|step| {
            let tone = reduce_to_diapason(&Ratio::FIFTH.checked_pow(step)?)?;
            Ok(SpiralTone { step, tone })
        })
        .collect()
}

/// `N` equal divisions of the diapason.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualTemperament {
    divisions: u32,
    degrees: Vec<f64>,
}

impl EqualTemperament {
    pub fn new(divisions: u32) -> Result<EqualTemperament> {
        if divisions == 0 {
            return Err(Error::InvalidConfig("equal temperament needs N ≥ 1".into()));
        }
        let n = f64::from(divisions);
        let degrees = (0..=divisions)
            .map(|k| if k == divisions { 2.0 } else { (f64::from(k) / n).exp2() })
            .collect();
        Ok(EqualTemperament { divisions, degrees })
    }

    pub fn divisions(&self) -> u32 {
        self.divisions
    }

    /// All `N + 1` degrees, from 1 to 2.
    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Degree `index`, counted from 1 (so degree `N + 1` is the diapason).
    pub fn degree(&self, index: usize) -> Option<f64> {
        index.checked_sub(1).and_then(|i| self.degrees.get(i).copied())
    }

    pub fn step_cents(&self) -> f64 {
        1200.0 / f64::from(self.divisions)
    }
}

pub fn equal_temperament(divisions: u32) -> Result<EqualTemperament> {
    EqualTemperament::new(divisions)
}

/// `1200 · log2(x)` for a positive real.
pub fn cents(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::NotPositiveReal(x));
    }
    Ok(1200.0 * x.log2())
}

/// Conventional solmization name for the common diatonic tones, display only.
pub fn solfege(tone: &PitchClass) -> Option<&'static str> {
    let v = tone.value();
    let name = match (v.numer(), v.denom()) {
        (1, 1) | (2, 1) => "DO",
        (9, 8) => "RE",
        (5, 4) | (81, 64) => "MI",
        (4, 3) => "FA",
        (3, 2) => "SOL",
        (5, 3) | (27, 16) => "LA",
        (15, 8) | (243, 128) => "SI",
        _ => return None,
    };
    Some(name)
}

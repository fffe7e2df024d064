//! Pairwise mean tables, interval names, comma and factor identities,
//! diapente transposition checks and comparison against equal temperament.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{factorize, is_smooth, Ratio, Restriction};
use crate::means::MeanKind;
use crate::scales::{reduce_to_diapason, step_intervals, PitchClass, Scale};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellClass {
    /// The mean is already a tone of the scale.
    InScale,
    /// Not in the scale, but inside the prime limit.
    InLimit,
    Outside,
}

impl CellClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CellClass::InScale => "InScale",
            CellClass::InLimit => "InLimit",
            CellClass::Outside => "Outside",
        }
    }
}

impl fmt::Display for CellClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub row: PitchClass,
    pub col: PitchClass,
    pub mean: Ratio,
    pub class: CellClass,
}

/// Upper triangle of pairwise means, stored row-major (`row < col`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeanTable {
    pub scale: Scale,
    pub kind: MeanKind,
    #[serde(serialize_with = "ser_restriction", deserialize_with = "de_restriction")]
    pub restriction: Restriction,
    pub cells: Vec<TableCell>,
}

fn ser_restriction<S: serde::Serializer>(r: &Restriction, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

fn de_restriction<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Restriction, D::Error> {
    let text = String::deserialize(d)?;
    text.parse().map_err(serde::de::Error::custom)
}

impl MeanTable {
    /// Order-insensitive lookup; `None` on the diagonal or for foreign tones.
    pub fn cell(&self, a: &Ratio, b: &Ratio) -> Option<&TableCell> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        self.cells.iter().find(|c| c.row.value() == *lo && c.col.value() == *hi)
    }

    pub fn cells_of(&self, class: CellClass) -> impl Iterator<Item = &TableCell> {
        self.cells.iter().filter(move |c| c.class == class)
    }
}

/// The arithmetic-mean table of `scale`.
pub fn mean_table(scale: &Scale, restriction: &Restriction) -> Result<MeanTable> {
    mean_table_with_kind(scale, restriction, MeanKind::Arithmetic)
}

/// Like [`mean_table`] for the arithmetic or harmonic mean. Geometric tables
/// are rejected since most cells would be irrational.
pub fn mean_table_with_kind(scale: &Scale, restriction: &Restriction, kind: MeanKind) -> Result<MeanTable> {
    if scale.len() < 2 {
        return Err(Error::TooFewTones {
            needed: 2,
            got: scale.len(),
        });
    }
    if kind == MeanKind::Geometric {
        return Err(Error::InvalidConfig("mean tables support A and H only".into()));
    }
    let tones = scale.tones();
    let mut cells = Vec::with_capacity(tones.len() * (tones.len() - 1) / 2);
    for (i, row) in tones.iter().enumerate() {
        for col in &tones[i + 1..] {
            let mean = kind
                .exact_mean(&row.value(), &col.value())?
                .expect("arithmetic and harmonic means are always rational");
            let class = if scale.contains(&mean) {
                CellClass::InScale
            } else if is_smooth(&mean, restriction) {
                CellClass::InLimit
            } else {
                CellClass::Outside
            };
            cells.push(TableCell {
                row: *row,
                col: *col,
                mean,
                class,
            });
        }
    }
    Ok(MeanTable {
        scale: scale.clone(),
        kind,
        restriction: restriction.clone(),
        cells,
    })
}

/// The interval between two tones, as a ratio ≥ 1.
pub fn comma_between(a: &PitchClass, b: &PitchClass) -> Result<Ratio> {
    a.value().distance(&b.value())
}

/// A 5-limit ratio written as `(5/4)^thirds · (3/2)^fifths · 2^octaves`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiapenteRecipe {
    pub ratio: Ratio,
    /// Power of the natural third 5/4 (equals the exponent of 5).
    pub thirds: i32,
    /// Power of the diapente 3/2 (equals the exponent of 3).
    pub fifths: i32,
    /// Whole diapasons left to balance the powers of 2.
    pub octaves: i32,
}

impl DiapenteRecipe {
    pub fn recompose(&self) -> Result<Ratio> {
        Ratio::new(5, 4)?
            .checked_pow(self.thirds)?
            .checked_mul(&Ratio::FIFTH.checked_pow(self.fifths)?)?
            .checked_mul(&Ratio::TWO.checked_pow(self.octaves)?)
    }
}

impl fmt::Display for DiapenteRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = |n: i32| if n >= 0 { "up" } else { "down" };
        let base = match self.thirds {
            0 => "1".to_string(),
            1 => "5/4".to_string(),
            n => format!("(5/4)^{n}"),
        };
        write!(
            f,
            "{} = from {}: {} diapente {}, {} diapason {}",
            self.ratio,
            base,
            self.fifths.unsigned_abs(),
            dir(self.fifths),
            self.octaves.unsigned_abs(),
            dir(self.octaves)
        )
    }
}

/// Expresses a 5-limit ratio through natural thirds, diapentes and diapasons,
/// e.g. `135/128 = 5/4 · (3/2)³ · 2⁻²`.
pub fn factor_identity(r: &Ratio) -> Result<DiapenteRecipe> {
    let f = factorize(r);
    if !f.is_five_limit() {
        return Err(Error::NotSmooth(*r));
    }
    // (5/4)^p (3/2)^q 2^s has 2-exponent s - 2p - q.
    Ok(DiapenteRecipe {
        ratio: *r,
        thirds: f.exp5,
        fifths: f.exp3,
        octaves: f.exp2 + 2 * f.exp5 + f.exp3,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiapenteImage {
    pub tone: PitchClass,
    /// `tone · 3/2`, folded into the diapason.
    pub image: PitchClass,
    pub in_scale: bool,
}

/// Transposes each tone up a diapente and reports whether the result is again
/// a tone of `scale`, up to whole diapasons.
pub fn hexachord_diapente_check(scale: &Scale) -> Result<Vec<DiapenteImage>> {
    diapente_images_within(scale, scale)
}

/// Transposes each tone of `tones` up a diapente and tests membership in `reference`.
pub fn diapente_images_within(tones: &Scale, reference: &Scale) -> Result<Vec<DiapenteImage>> {
    tones
        .tones()
        .iter()
        .map(|t| {
            let image = reduce_to_diapason(&t.value().checked_mul(&Ratio::FIFTH)?)?;
            Ok(DiapenteImage {
                tone: *t,
                image,
                in_scale: reference.contains_class(&image),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualComparison {
    pub tone: PitchClass,
    /// 1-based index of the nearest tempered degree.
    pub degree: usize,
    /// `cents(tone) − cents(degree)`.
    pub deviation_cents: f64,
}

/// Nearest degree of `N`-tone equal temperament for a single ratio.
pub fn nearest_equal_degree(tone: &Ratio, divisions: u32) -> Result<(usize, f64)> {
    if divisions == 0 {
        return Err(Error::InvalidConfig("equal temperament needs N ≥ 1".into()));
    }
    let step = 1200.0 / f64::from(divisions);
    let c = tone.cents();
    let index = (c / step).round();
    let deviation = c - index * step;
    let degree = index as i64 + 1;
    usize::try_from(degree)
        .map(|d| (d, deviation))
        .map_err(|_| Error::InvalidConfig(format!("{tone} lies below the unison")))
}

pub fn compare_to_equal(scale: &Scale, divisions: u32) -> Result<Vec<EqualComparison>> {
    scale
        .tones()
        .iter()
        .map(|t| {
            let (degree, deviation_cents) = nearest_equal_degree(&t.value(), divisions)?;
            Ok(EqualComparison {
                tone: *t,
                degree,
                deviation_cents,
            })
        })
        .collect()
}

/// Traditional name of an interval, when it has one.
pub fn interval_name(r: &Ratio) -> Option<&'static str> {
    let label = match (r.numer(), r.denom()) {
        (9, 8) => "tono maggiore (epogdoon)",
        (10, 9) => "tono minore",
        (16, 15) => "semitono maggiore",
        (25, 24) => "semitono minore",
        (256, 243) => "limma",
        (81, 80) => "comma",
        (135, 128) => "(unnamed gap)",
        (2, 1) => "diapason",
        (3, 2) => "diapente",
        (4, 3) => "diatessaron",
        (6, 5) => "senario 6:5",
        (5, 3) => "senario 5:3",
        (8, 5) => "senario 8:5",
        _ => return None,
    };
    Some(label)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub ratio: Ratio,
    pub label: Option<String>,
    pub count: usize,
}

/// Counts of each step interval of `scale`, ascending by size.
pub fn interval_census(scale: &Scale) -> Result<Vec<CensusEntry>> {
    let mut counts: BTreeMap<Ratio, usize> = BTreeMap::new();
    for step in step_intervals(scale)? {
        *counts.entry(step).or_default() += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(ratio, count)| CensusEntry {
            ratio,
            label: interval_name(&ratio).map(str::to_string),
            count,
        })
        .collect())
}

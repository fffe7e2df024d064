//! The mean generator and its iteration to a fixpoint.
//!
//! One generator pass takes every unordered pair of distinct tones, forms each
//! configured mean, and keeps the exact results that satisfy the prime-limit
//! restriction. [`mean_closure`] repeats the pass on the accumulated set, adding
//! every new tone at once, until a pass contributes nothing or the generation
//! cap is reached. Each added tone carries one witness: the first pair (in
//! ascending order) and mean kind that produced it.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IteratorRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::exact::Restriction;
use crate::exact::{is_smooth, Ratio};
use crate::means::MeanKind;
use crate::scales::{reduce_to_diapason, PitchClass, Scale};

pub const DEFAULT_MAX_GENERATIONS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    kinds: BTreeSet<MeanKind>,
    restriction: Restriction,
    max_generations: usize,
    keep_within_diapason: bool,
}

impl GeneratorConfig {
    pub fn new<I: IntoIterator<Item = MeanKind>>(
        kinds: I,
        restriction: Restriction,
        max_generations: usize,
        keep_within_diapason: bool,
    ) -> Result<GeneratorConfig> {
        let kinds: BTreeSet<MeanKind> = kinds.into_iter().collect();
        if kinds.is_empty() {
            return Err(Error::InvalidConfig("at least one mean kind is required".into()));
        }
        if max_generations == 0 {
            return Err(Error::InvalidConfig("max_generations must be at least 1".into()));
        }
        Ok(GeneratorConfig {
            kinds,
            restriction,
            max_generations,
            keep_within_diapason,
        })
    }

    /// Arithmetic means under the given restriction, default cap.
    pub fn arithmetic(restriction: Restriction) -> GeneratorConfig {
        GeneratorConfig {
            restriction,
            ..GeneratorConfig::default()
        }
    }

    pub fn with_kinds<I: IntoIterator<Item = MeanKind>>(self, kinds: I) -> Result<GeneratorConfig> {
        GeneratorConfig::new(kinds, self.restriction, self.max_generations, self.keep_within_diapason)
    }

    pub fn with_max_generations(self, max_generations: usize) -> Result<GeneratorConfig> {
        GeneratorConfig::new(self.kinds, self.restriction, max_generations, self.keep_within_diapason)
    }

    pub fn kinds(&self) -> &BTreeSet<MeanKind> {
        &self.kinds
    }

    pub fn restriction(&self) -> &Restriction {
        &self.restriction
    }

    pub fn max_generations(&self) -> usize {
        self.max_generations
    }

    pub fn keep_within_diapason(&self) -> bool {
        self.keep_within_diapason
    }
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            kinds: [MeanKind::Arithmetic].into(),
            restriction: Restriction::natural(),
            max_generations: DEFAULT_MAX_GENERATIONS,
            keep_within_diapason: true,
        }
    }
}

/// Why a tone was generated: `tone` is the `kind` mean of `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub tone: PitchClass,
    pub a: PitchClass,
    pub b: PitchClass,
    pub kind: MeanKind,
}

/// Every admissible mean of `tones`, keyed by value, each with its first witness.
pub fn generate_means_with_witnesses(
    tones: &[PitchClass],
    config: &GeneratorConfig,
) -> Result<BTreeMap<PitchClass, Witness>> {
    if tones.len() < 2 {
        return Err(Error::TooFewTones {
            needed: 2,
            got: tones.len(),
        });
    }
    let mut sorted = tones.to_vec();
    sorted.sort();
    sorted.dedup();

    let mut found = BTreeMap::new();
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            for &kind in &config.kinds {
                let Some(mean) = kind.exact_mean(&a.value(), &b.value())? else {
                    continue;
                };
                if !is_smooth(&mean, &config.restriction) {
                    continue;
                }
                let Some(tone) = place(&mean, config)? else {
                    continue;
                };
                found.entry(tone).or_insert(Witness {
                    tone,
                    a: *a,
                    b: *b,
                    kind,
                });
            }
        }
    }
    Ok(found)
}

/// Means of tones inside the diapason stay inside it; anything else is folded
/// when the config allows and dropped otherwise.
fn place(mean: &Ratio, config: &GeneratorConfig) -> Result<Option<PitchClass>> {
    match PitchClass::new(*mean) {
        Ok(p) => Ok(Some(p)),
        Err(_) if config.keep_within_diapason => reduce_to_diapason(mean).map(Some),
        Err(_) => Ok(None),
    }
}

/// One pass of the mean generator. Means that are already tones of the input
/// are reported too.
pub fn generate_means(tones: &Scale, config: &GeneratorConfig) -> Result<BTreeSet<PitchClass>> {
    Ok(generate_means_with_witnesses(tones.tones(), config)?
        .into_keys()
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generation {
    /// Sorted ascending.
    pub added: Vec<PitchClass>,
    /// One per added tone, same order.
    pub witnesses: Vec<Witness>,
}

/// The generation-by-generation record of a closure run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureTrace {
    #[serde(with = "tone_list")]
    pub seed: Scale,
    pub generations: Vec<Generation>,
    #[serde(rename = "fixpoint")]
    pub fixpoint_reached: bool,
    #[serde(rename = "final", with = "tone_list")]
    pub final_scale: Scale,
}

impl ClosureTrace {
    /// Every tone added across all generations, ascending.
    pub fn additions(&self) -> BTreeSet<PitchClass> {
        self.generations.iter().flat_map(|g| g.added.iter().copied()).collect()
    }

    /// The 1-based generation in which `tone` first appeared; 0 for seed tones.
    pub fn generation_of(&self, tone: &Ratio) -> Option<usize> {
        if self.seed.contains(tone) {
            return Some(0);
        }
        self.generations
            .iter()
            .position(|g| g.added.iter().any(|t| t.value() == *tone))
            .map(|i| i + 1)
    }
}

/// Scales inside a trace serialize as bare tone arrays.
mod tone_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scales::{PitchClass, Scale};

    pub fn serialize<S: Serializer>(scale: &Scale, s: S) -> Result<S::Ok, S::Error> {
        scale.tones().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scale, D::Error> {
        let tones = Vec::<PitchClass>::deserialize(d)?;
        Scale::new("", tones).map_err(serde::de::Error::custom)
    }
}

/// Iterates the generator from `seed` until nothing new appears or
/// `max_generations` generations have been added.
pub fn mean_closure(seed: &Scale, config: &GeneratorConfig) -> Result<ClosureTrace> {
    if seed.len() < 2 {
        return Err(Error::TooFewTones {
            needed: 2,
            got: seed.len(),
        });
    }
    let mut current = seed.to_set();
    let mut generations = Vec::new();
    let mut fixpoint_reached = false;

    let fresh = |current: &BTreeSet<PitchClass>| -> Result<Vec<Witness>> {
        let tones: Vec<PitchClass> = current.iter().copied().collect();
        Ok(generate_means_with_witnesses(&tones, config)?
            .into_values()
            .filter(|w| !current.contains(&w.tone))
            .collect())
    };

    for _ in 0..config.max_generations {
        let witnesses = fresh(&current)?;
        if witnesses.is_empty() {
            fixpoint_reached = true;
            break;
        }
        let added: Vec<PitchClass> = witnesses.iter().map(|w| w.tone).collect();
        current.extend(added.iter().copied());
        generations.push(Generation { added, witnesses });
    }
    if !fixpoint_reached {
        // The cap may coincide with the last productive generation.
        fixpoint_reached = fresh(&current)?.is_empty();
    }

    Ok(ClosureTrace {
        seed: seed.clone(),
        generations,
        fixpoint_reached,
        final_scale: Scale::from_set(format!("closure of {}", seed.name()), current),
    })
}

/// Runs `trials` closures that insert a single randomly chosen new mean per
/// step and checks that each ends on the batch closure's final set.
///
/// Returns `Ok(false)` when the batch closure itself does not reach a fixpoint.
pub fn closure_order_independence<R: Rng + ?Sized>(
    seed: &Scale,
    config: &GeneratorConfig,
    trials: usize,
    rng: &mut R,
) -> Result<bool> {
    let batch = mean_closure(seed, config)?;
    if !batch.fixpoint_reached {
        return Ok(false);
    }
    let target = batch.final_scale.to_set();

    for _ in 0..trials {
        let mut current = seed.to_set();
        loop {
            let tones: Vec<PitchClass> = current.iter().copied().collect();
            let candidates = generate_means_with_witnesses(&tones, config)?;
            let pick = candidates.keys().filter(|t| !current.contains(t)).choose(rng).copied();
            match pick {
                Some(tone) => {
                    current.insert(tone);
                    if current.len() > target.len() {
                        return Ok(false);
                    }
                }
                None => break,
            }
        }
        if current != target {
            return Ok(false);
        }
    }
    Ok(true)
}

//! Exact construction and analysis of Pythagorean, natural (5-limit) and
//! equal-tempered pitch systems, built around the *mean generator*: the set
//! of pairwise arithmetic (optionally harmonic or geometric) means of a tone
//! set, filtered by a prime limit, iterated to a fixpoint.
//!
//! Starting from the four consonances `{1, 4/3, 3/2, 2}` under the 5-limit,
//! the closure adds six tones and stops at
//! `{1, 9/8, 5/4, 81/64, 4/3, 45/32, 3/2, 25/16, 5/3, 2}`; starting from the
//! natural scale it stops at the same set plus `27/16` and `15/8`.
//!
//! ```
//! use proportional_tuning::{generator, scales::CanonicalScale};
//!
//! let trace = generator::mean_closure(
//!     &CanonicalScale::T.scale(),
//!     &generator::GeneratorConfig::default(),
//! )
//! .unwrap();
//! assert!(trace.fixpoint_reached);
//! assert_eq!(trace.final_scale.tones(), CanonicalScale::Sn1.scale().tones());
//! ```

pub mod analysis;
pub mod error;
pub mod exact;
pub mod generator;
pub mod means;
pub mod report;
pub mod scales;

pub use error::{Error, Result};
pub use exact::{Ratio, Restriction};
pub use means::MeanKind;
pub use scales::{PitchClass, Scale};

//! Name matching and evaluation metrics.
//!
//! Detected and ground-truth names are compared after canonicalization. A
//! sample's precision is `TP / |D|` (zero when nothing was detected), recall
//! is `TP / |G|`, and F1 their harmonic mean. Exact matching pairs equal
//! names; fuzzy matching accepts pairs within a Levenshtein bound. Both use a
//! greedy one-to-one assignment.

mod aggregate;
mod bootstrap;
mod levenshtein;
mod matching;
mod scores;

pub use aggregate::{aggregate, Aggregate, LanguageAggregate};
pub use bootstrap::{paired_bootstrap, BootstrapConfig};
pub use levenshtein::{levenshtein, within_distance};
pub use matching::{match_exact, match_fuzzy, MatchPair, MatchResult};
pub use scores::{evaluate_names, sample_metrics, SampleMetrics, Scores, CATASTROPHIC_F1};

use alloc::string::String;

/// Default fuzzy bound: two edits cover single-glyph confusions such as `rn`/`m`.
pub const DEFAULT_FUZZY_MAX_DIST: usize = 2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("sample has no ground-truth names and must be excluded")]
    EmptyTruth,
    #[error("cannot aggregate an empty sample list")]
    NoSamples,
    #[error("paired samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("paired samples misaligned at position {index}: {left:?} vs {right:?}")]
    Misaligned { index: usize, left: String, right: String },
    #[error("bootstrap needs at least one resample")]
    NoResamples,
}

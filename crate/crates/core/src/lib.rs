//! Evaluation core for OCR on food-packaging ingredient lists.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It covers the
//! word-level normalization of engine output, spatial grouping of word boxes,
//! ingredient extraction, exact and fuzzy matching metrics with a paired
//! bootstrap, and a geometry-level synthetic label generator with an OCR
//! noise simulator. File formats, the CLI and report writers live in the
//! `labeleval` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod clustering;
pub mod data;
pub mod extraction;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod synthgen;

pub use clustering::{ClusterConfig, VocabularySet};
pub use extraction::{CandidateIngredient, DelimiterSet, Extractor, StopList};
pub use metrics::{MatchResult, SampleMetrics, Scores};
pub use model::{canonicalize, CanonicalName, GroundTruthLabel, OcrDocument, Point, Rect, WordBox};
pub use pipeline::Strategy;

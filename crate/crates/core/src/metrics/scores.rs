use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::matching::{match_exact, match_fuzzy, MatchResult};
use super::MetricsError;
use crate::model::CanonicalName;

/// A sample is catastrophic when its exact F1 falls below this.
pub const CATASTROPHIC_F1: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision, recall and F1 for one match. Precision is 0 when nothing was detected.
pub fn sample_metrics(m: &MatchResult, n_detected: usize, n_truth: usize) -> Result<Scores, MetricsError> {
    if n_truth == 0 {
        return Err(MetricsError::EmptyTruth);
    }
    let tp = m.true_positives() as f64;
    let precision = if n_detected == 0 { 0.0 } else { tp / n_detected as f64 };
    let recall = tp / n_truth as f64;
    let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
    Ok(Scores { precision, recall, f1 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMetrics {
    pub image_id: String,
    pub language: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub fuzzy_f1: f64,
    pub is_catastrophic: bool,
    pub n_detected: usize,
    pub n_truth: usize,
}

impl SampleMetrics {
    pub fn from_scores(
        image_id: &str,
        language: &str,
        exact: Scores,
        fuzzy: Scores,
        n_detected: usize,
        n_truth: usize,
    ) -> Self {
        SampleMetrics {
            image_id: image_id.into(),
            language: language.into(),
            precision: exact.precision,
            recall: exact.recall,
            f1: exact.f1,
            fuzzy_f1: fuzzy.f1,
            is_catastrophic: exact.f1 < CATASTROPHIC_F1,
            n_detected,
            n_truth,
        }
    }
}

/// Exact and fuzzy scores of one sample.
pub fn evaluate_names(
    image_id: &str,
    language: &str,
    detected: &[CanonicalName],
    truth: &[CanonicalName],
    max_dist: usize,
) -> Result<SampleMetrics, MetricsError> {
    let exact = sample_metrics(&match_exact(detected, truth), detected.len(), truth.len())?;
    let fuzzy = sample_metrics(&match_fuzzy(detected, truth, max_dist), detected.len(), truth.len())?;
    Ok(SampleMetrics::from_scores(image_id, language, exact, fuzzy, detected.len(), truth.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::MatchPair;
    use alloc::vec::Vec;

    fn with_tp(tp: usize) -> MatchResult {
        MatchResult {
            pairs: (0..tp).map(|i| MatchPair { detected: i, truth: i, distance: 0 }).collect(),
            unmatched_detected: Vec::new(),
            unmatched_truth: Vec::new(),
        }
    }

    #[test]
    fn partial_match() {
        let s = sample_metrics(&with_tp(2), 4, 5).unwrap();
        assert_eq!(s.precision, 0.5);
        assert_eq!(s.recall, 0.4);
        assert!((s.f1 - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn nothing_detected() {
        let s = sample_metrics(&with_tp(0), 0, 5).unwrap();
        assert_eq!(s, Scores { precision: 0.0, recall: 0.0, f1: 0.0 });
        let m = SampleMetrics::from_scores("i", "en", s, s, 0, 5);
        assert!(m.is_catastrophic);
    }

    #[test]
    fn perfect_match() {
        let s = sample_metrics(&with_tp(5), 5, 5).unwrap();
        assert_eq!(s, Scores { precision: 1.0, recall: 1.0, f1: 1.0 });
    }

    #[test]
    fn empty_truth_is_excluded() {
        assert_eq!(sample_metrics(&with_tp(0), 3, 0), Err(MetricsError::EmptyTruth));
    }
}

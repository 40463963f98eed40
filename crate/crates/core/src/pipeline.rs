//! Grouping, extraction and scoring of one document.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clustering::{
    strategy_dbscan_flat, strategy_dbscan_voting, strategy_line_based, strategy_raw, ClusterConfig, ClusterError,
    VocabularySet,
};
use crate::extraction::{names, CandidateIngredient, Extractor};
use crate::metrics::{evaluate_names, MetricsError, SampleMetrics, DEFAULT_FUZZY_MAX_DIST};
use crate::model::{GroundTruthLabel, OcrDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Raw,
    Line,
    DbscanFlat,
    DbscanVote,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Raw, Strategy::Line, Strategy::DbscanFlat, Strategy::DbscanVote];

    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Raw => "raw",
            Strategy::Line => "line",
            Strategy::DbscanFlat => "dbscan_flat",
            Strategy::DbscanVote => "dbscan_vote",
        }
    }

    /// Row label used in report tables.
    pub fn title(&self) -> &'static str {
        match self {
            Strategy::Raw => "(a) Raw",
            Strategy::Line => "(b) Line-based",
            Strategy::DbscanFlat => "(c) DBSCAN flat",
            Strategy::DbscanVote => "(d) DBSCAN + voting",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown strategy {0:?} (expected raw, line, dbscan_flat or dbscan_vote)")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL.into_iter().find(|st| st.as_str() == s).ok_or_else(|| UnknownStrategy(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Everything needed to turn an OCR document into scored candidates.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub cluster: ClusterConfig,
    pub extractor: Extractor,
    pub vocabularies: Vec<VocabularySet>,
    pub fuzzy_max_dist: usize,
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline {
            cluster: ClusterConfig::default(),
            extractor: Extractor::default(),
            vocabularies: crate::data::vocabularies(),
            fuzzy_max_dist: DEFAULT_FUZZY_MAX_DIST,
        }
    }
}

impl Pipeline {
    pub fn candidates(&self, doc: &OcrDocument, strategy: Strategy) -> Result<Vec<CandidateIngredient>, PipelineError> {
        Ok(match strategy {
            Strategy::Raw => self.extractor.extract(&strategy_raw(doc)),
            Strategy::Line => self.extractor.extract_lines(&strategy_line_based(doc, &self.cluster)),
            Strategy::DbscanFlat => self.extractor.extract(&strategy_dbscan_flat(doc, &self.cluster)),
            Strategy::DbscanVote => {
                self.extractor.extract(&strategy_dbscan_voting(doc, &self.cluster, &self.vocabularies)?)
            }
        })
    }

    pub fn evaluate(
        &self,
        doc: &OcrDocument,
        label: &GroundTruthLabel,
        strategy: Strategy,
    ) -> Result<SampleMetrics, PipelineError> {
        let detected = names(&self.candidates(doc, strategy)?);
        let truth = label.canonical_names();
        Ok(evaluate_names(&label.image_id, &label.language, &detected, &truth, self.fuzzy_max_dist)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.as_str().parse::<Strategy>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), alloc::format!("\"{}\"", s.as_str()));
        }
        assert!("dbscan".parse::<Strategy>().is_err());
    }
}

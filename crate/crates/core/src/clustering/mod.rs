//! Word grouping strategies used to isolate the ingredient region.
//!
//! Four strategies are compared:
//! - raw: every word with at least two code points;
//! - line: words grouped into rows by centroid y;
//! - dbscan_flat: DBSCAN over centroids, largest cluster wins;
//! - dbscan_vote: DBSCAN over centroids, the cluster with the highest share
//!   of vocabulary hits wins.

mod dbscan;
mod vocab;

pub use dbscan::{dbscan, dbscan_labels, Cluster, ClusterLabel};
pub use vocab::VocabularySet;

use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::metrics::DEFAULT_FUZZY_MAX_DIST;
use crate::model::{canonicalize, OcrDocument, Point, WordBox};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClusterError {
    #[error("document has no words")]
    EmptyDocument,
    #[error("vote strategy needs at least one vocabulary")]
    NoVocabularies,
    #[error("invalid cluster config: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterConfig {
    pub eps_multiplier: f64,
    pub min_samples: usize,
    pub line_y_tolerance_multiplier: f64,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig { eps_multiplier: 1.5, min_samples: 3, line_y_tolerance_multiplier: 0.5 }
    }
}

impl ClusterConfig {
    pub fn validate(&self) -> Result<(), ClusterError> {
        if !(self.eps_multiplier.is_finite() && self.eps_multiplier > 0.0) {
            return Err(ClusterError::InvalidConfig("eps_multiplier must be positive"));
        }
        if self.min_samples == 0 {
            return Err(ClusterError::InvalidConfig("min_samples must be at least 1"));
        }
        if !(self.line_y_tolerance_multiplier.is_finite() && self.line_y_tolerance_multiplier > 0.0) {
            return Err(ClusterError::InvalidConfig("line_y_tolerance_multiplier must be positive"));
        }
        Ok(())
    }
}

/// Median word height; the mean of the two central values for even counts.
pub fn median_height(words: &[WordBox]) -> Result<f64, ClusterError> {
    if words.is_empty() {
        return Err(ClusterError::EmptyDocument);
    }
    let mut h: Vec<f64> = words.iter().map(|w| w.bbox.height).collect();
    h.sort_by(f64::total_cmp);
    let n = h.len();
    Ok(if n % 2 == 1 { h[n / 2] } else { (h[n / 2 - 1] + h[n / 2]) / 2.0 })
}

/// Rows of word indices by single linkage over sorted centroid y. Rows come
/// top to bottom; words in a row left to right, ties kept in index order.
pub fn group_rows(words: &[WordBox], tolerance: f64) -> Vec<Vec<usize>> {
    let centroids: Vec<Point> = words.iter().map(WordBox::centroid).collect();
    let mut by_y: Vec<usize> = (0..words.len()).collect();
    by_y.sort_by(|&a, &b| centroids[a].y.total_cmp(&centroids[b].y));

    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut last_y = f64::NEG_INFINITY;
    for i in by_y {
        let y = centroids[i].y;
        match rows.last_mut() {
            Some(row) if y - last_y <= tolerance => row.push(i),
            _ => rows.push(alloc::vec![i]),
        }
        last_y = y;
    }
    for row in &mut rows {
        row.sort_by(|&a, &b| centroids[a].x.total_cmp(&centroids[b].x).then(a.cmp(&b)));
    }
    rows
}

pub fn strategy_raw(doc: &OcrDocument) -> Vec<WordBox> {
    doc.words.iter().filter(|w| w.char_count() >= 2).cloned().collect()
}

pub fn strategy_line_based(doc: &OcrDocument, cfg: &ClusterConfig) -> Vec<Vec<WordBox>> {
    let Ok(h) = median_height(&doc.words) else {
        return Vec::new();
    };
    group_rows(&doc.words, cfg.line_y_tolerance_multiplier * h)
        .into_iter()
        .map(|row| row.into_iter().map(|i| doc.words[i].clone()).collect())
        .collect()
}

/// DBSCAN clusters of a document at `eps = eps_multiplier * median height`.
pub fn cluster_words(doc: &OcrDocument, cfg: &ClusterConfig) -> Vec<Cluster> {
    let Ok(h) = median_height(&doc.words) else {
        return Vec::new();
    };
    let centroids: Vec<Point> = doc.words.iter().map(WordBox::centroid).collect();
    dbscan(&centroids, cfg.eps_multiplier * h, cfg.min_samples)
}

// (y, x) of the topmost-then-leftmost member centroid
fn anchor(doc: &OcrDocument, c: &Cluster) -> Point {
    c.member_indices
        .iter()
        .map(|&i| doc.words[i].centroid())
        .min_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)))
        .unwrap_or(Point::new(0.0, 0.0))
}

fn earlier_anchor(a: Point, b: Point) -> Ordering {
    b.y.total_cmp(&a.y).then(b.x.total_cmp(&a.x))
}

fn members(doc: &OcrDocument, c: &Cluster) -> Vec<WordBox> {
    c.member_indices.iter().map(|&i| doc.words[i].clone()).collect()
}

/// Members of the cluster with the best `key` ratio, or every word when all
/// points are noise.
fn select_cluster<F>(doc: &OcrDocument, cfg: &ClusterConfig, mut key: F) -> Vec<WordBox>
where
    F: FnMut(&Cluster) -> (usize, usize),
{
    let clusters = cluster_words(doc, cfg);
    let best = clusters.iter().filter(|c| !c.is_noise()).map(|c| (c, key(c), anchor(doc, c))).max_by(
        |(_, ka, pa), (_, kb, pb)| {
            // key = (numerator, denominator) of a ratio
            let (na, da) = *ka;
            let (nb, db) = *kb;
            (na * db).cmp(&(nb * da)).then(da.cmp(&db)).then(earlier_anchor(*pa, *pb))
        },
    );
    match best {
        Some((c, _, _)) => members(doc, c),
        None => doc.words.clone(),
    }
}

/// Largest DBSCAN cluster; ties go to the cluster holding the topmost-then-leftmost word.
pub fn strategy_dbscan_flat(doc: &OcrDocument, cfg: &ClusterConfig) -> Vec<WordBox> {
    select_cluster(doc, cfg, |c| (c.len(), 1))
}

/// Number of words in `indices` whose canonical text is within fuzzy reach of `vocab`.
pub fn vocabulary_hits(words: &[WordBox], indices: &[usize], vocab: &VocabularySet) -> usize {
    indices
        .iter()
        .filter(|&&i| canonicalize(words[i].text()).is_ok_and(|n| vocab.fuzzy_contains(&n, DEFAULT_FUZZY_MAX_DIST)))
        .count()
}

/// Cluster with the highest share of vocabulary hits, maximized over
/// vocabularies. Ties go to the larger cluster, then the topmost-leftmost one.
pub fn strategy_dbscan_voting(
    doc: &OcrDocument,
    cfg: &ClusterConfig,
    vocabs: &[VocabularySet],
) -> Result<Vec<WordBox>, ClusterError> {
    if vocabs.is_empty() {
        return Err(ClusterError::NoVocabularies);
    }
    Ok(select_cluster(doc, cfg, |c| {
        let hits = vocabs.iter().map(|v| vocabulary_hits(&doc.words, &c.member_indices, v)).max().unwrap_or(0);
        (hits, c.len())
    }))
}

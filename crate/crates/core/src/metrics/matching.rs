use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::levenshtein::within_distance;
use crate::model::CanonicalName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchPair {
    pub detected: usize,
    pub truth: usize,
    pub distance: usize,
}

/// One-to-one assignment between detected and ground-truth names.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MatchResult {
    pub pairs: Vec<MatchPair>,
    pub unmatched_detected: Vec<usize>,
    pub unmatched_truth: Vec<usize>,
}

impl MatchResult {
    pub fn true_positives(&self) -> usize {
        self.pairs.len()
    }

    pub fn false_positives(&self) -> usize {
        self.unmatched_detected.len()
    }

    pub fn false_negatives(&self) -> usize {
        self.unmatched_truth.len()
    }

    fn from_flags(pairs: Vec<MatchPair>, used_detected: &[bool], used_truth: &[bool]) -> Self {
        let open = |flags: &[bool]| flags.iter().enumerate().filter(|(_, u)| !**u).map(|(i, _)| i).collect();
        MatchResult { pairs, unmatched_detected: open(used_detected), unmatched_truth: open(used_truth) }
    }
}

/// Each detected name, in order, takes the first unmatched equal truth name.
pub fn match_exact(detected: &[CanonicalName], truth: &[CanonicalName]) -> MatchResult {
    let mut used_d = alloc::vec![false; detected.len()];
    let mut used_t = alloc::vec![false; truth.len()];
    let mut pairs = Vec::new();
    for (di, d) in detected.iter().enumerate() {
        if let Some(ti) = (0..truth.len()).find(|&ti| !used_t[ti] && truth[ti] == *d) {
            used_d[di] = true;
            used_t[ti] = true;
            pairs.push(MatchPair { detected: di, truth: ti, distance: 0 });
        }
    }
    MatchResult::from_flags(pairs, &used_d, &used_t)
}

/// Greedy assignment over all pairs within `max_dist`, taken in
/// (distance, detected index, truth index) order.
pub fn match_fuzzy(detected: &[CanonicalName], truth: &[CanonicalName], max_dist: usize) -> MatchResult {
    let mut edges = Vec::new();
    for (di, d) in detected.iter().enumerate() {
        for (ti, t) in truth.iter().enumerate() {
            if let Some(distance) = within_distance(d.as_str(), t.as_str(), max_dist) {
                edges.push(MatchPair { detected: di, truth: ti, distance });
            }
        }
    }
    edges.sort_by_key(|e| (e.distance, e.detected, e.truth));

    let mut used_d = alloc::vec![false; detected.len()];
    let mut used_t = alloc::vec![false; truth.len()];
    let mut pairs = Vec::new();
    for e in edges {
        if !used_d[e.detected] && !used_t[e.truth] {
            used_d[e.detected] = true;
            used_t[e.truth] = true;
            pairs.push(e);
        }
    }
    MatchResult::from_flags(pairs, &used_d, &used_t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::canonicalize;

    fn names(raw: &[&str]) -> Vec<CanonicalName> {
        raw.iter().map(|s| canonicalize(s).unwrap()).collect()
    }

    fn counts(m: &MatchResult) -> (usize, usize, usize) {
        (m.true_positives(), m.false_positives(), m.false_negatives())
    }

    #[test]
    fn exact_examples() {
        assert_eq!(counts(&match_exact(&names(&["water", "sugar"]), &names(&["sugar", "water", "salt"]))), (2, 0, 1));
        assert_eq!(counts(&match_exact(&names(&["salt", "salt"]), &names(&["salt"]))), (1, 1, 0));
        assert_eq!(counts(&match_exact(&[], &names(&["water"]))), (0, 0, 1));
    }

    #[test]
    fn fuzzy_examples() {
        assert_eq!(match_fuzzy(&names(&["gelaton"]), &names(&["gelatin"]), 2).true_positives(), 1);
        assert_eq!(match_fuzzy(&names(&["x"]), &names(&["water"]), 2).true_positives(), 0);

        let m = match_fuzzy(&names(&["salte", "salt"]), &names(&["salt"]), 2);
        assert_eq!(m.pairs, alloc::vec![MatchPair { detected: 1, truth: 0, distance: 0 }]);
        assert_eq!(m.unmatched_detected, alloc::vec![0]);
    }

    #[test]
    fn exact_pairs_have_zero_distance() {
        let m = match_exact(&names(&["a", "b", "a"]), &names(&["a", "a", "c"]));
        assert!(m.pairs.iter().all(|p| p.distance == 0));
        assert_eq!(m.true_positives(), 2);
    }
}

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{canonicalize, CanonicalName};

/// Known ingredient names of one language.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VocabularySet {
    pub language: String,
    entries: BTreeSet<CanonicalName>,
    // entries as code points, bucketed by length
    by_len: BTreeMap<usize, Vec<Vec<char>>>,
}

impl VocabularySet {
    pub fn new<'a>(language: &str, names: impl IntoIterator<Item = &'a str>) -> Self {
        let entries: BTreeSet<CanonicalName> = names.into_iter().filter_map(|n| canonicalize(n).ok()).collect();
        let mut by_len: BTreeMap<usize, Vec<Vec<char>>> = BTreeMap::new();
        for e in &entries {
            let chars: Vec<char> = e.as_str().chars().collect();
            by_len.entry(chars.len()).or_default().push(chars);
        }
        VocabularySet { language: language.into(), entries, by_len }
    }

    /// One name per line; blank lines and `#` comments are skipped.
    pub fn parse(language: &str, text: &str) -> Self {
        Self::new(language, text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeSet<CanonicalName> {
        &self.entries
    }

    pub fn contains(&self, name: &CanonicalName) -> bool {
        self.entries.contains(name)
    }

    /// True when some entry is within `max_dist` edits of `name`.
    pub fn fuzzy_contains(&self, name: &CanonicalName, max_dist: usize) -> bool {
        if self.contains(name) {
            return true;
        }
        let query: Vec<char> = name.as_str().chars().collect();
        let lo = query.len().saturating_sub(max_dist);
        self.by_len
            .range(lo..=query.len() + max_dist)
            .flat_map(|(_, bucket)| bucket)
            .any(|e| bounded_distance(&query, e, max_dist))
    }
}

// Levenshtein DP that gives up once a whole row exceeds the bound.
fn bounded_distance(a: &[char], b: &[char], max_dist: usize) -> bool {
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ac) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        let mut best = row[0];
        for (j, bc) in b.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = (diag + usize::from(ac != bc)).min(above + 1).min(row[j] + 1);
            diag = above;
            best = best.min(row[j + 1]);
        }
        if best > max_dist {
            return false;
        }
    }
    row[b.len()] <= max_dist
}

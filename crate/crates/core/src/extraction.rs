//! Candidate ingredient names from a selected word group.
//!
//! Words are put in reading order, header tokens are removed, the remaining
//! texts are joined with single spaces and the result is split on delimiter
//! code points. Each fragment is canonicalized; empty fragments are dropped.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::clustering::{group_rows, median_height};
use crate::model::{canonicalize, CanonicalName, Rect, WordBox};

pub const COMMA: char = ',';
pub const FULL_STOP: char = '.';

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractionError {
    #[error("delimiter set must contain the comma")]
    MissingComma,
}

/// Code points that separate ingredient names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DelimiterSet(BTreeSet<char>);

impl DelimiterSet {
    pub fn new(chars: impl IntoIterator<Item = char>) -> Result<Self, ExtractionError> {
        let set: BTreeSet<char> = chars.into_iter().collect();
        if !set.contains(&COMMA) {
            return Err(ExtractionError::MissingComma);
        }
        Ok(DelimiterSet(set))
    }

    /// Comma, semicolon, ideographic comma, Arabic comma, middle dot, and the
    /// full stop when `full_stop` is set.
    pub fn standard(full_stop: bool) -> Self {
        let mut set: BTreeSet<char> = [COMMA, ';', '\u{3001}', '\u{060C}', '\u{00B7}'].into_iter().collect();
        if full_stop {
            set.insert(FULL_STOP);
        }
        DelimiterSet(set)
    }

    pub fn contains(&self, c: char) -> bool {
        self.0.contains(&c)
    }

    pub fn chars(&self) -> impl Iterator<Item = char> + '_ {
        self.0.iter().copied()
    }
}

impl Default for DelimiterSet {
    fn default() -> Self {
        Self::standard(true)
    }
}

impl TryFrom<String> for DelimiterSet {
    type Error = ExtractionError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Self::new(s.chars())
    }
}

impl From<DelimiterSet> for String {
    fn from(d: DelimiterSet) -> String {
        d.0.into_iter().collect()
    }
}

/// Header tokens such as "ingredients" that are removed before splitting.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StopList {
    entries: BTreeSet<CanonicalName>,
}

const HEADER_COLONS: [char; 2] = [':', '\u{FF1A}'];

impl StopList {
    pub fn new<'a>(entries: impl IntoIterator<Item = &'a str>) -> Self {
        StopList { entries: entries.into_iter().filter_map(|e| canonicalize(e).ok()).collect() }
    }

    /// One header token per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        Self::new(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn is_header(&self, s: &str) -> bool {
        canonicalize(s).is_ok_and(|c| self.entries.contains(&c))
    }

    /// The word text with a leading header removed. A bare header, with or
    /// without a colon, leaves nothing; `header:rest` leaves `rest`.
    pub fn strip<'a>(&self, text: &'a str) -> &'a str {
        if let Some(pos) = text.find(HEADER_COLONS) {
            let colon_len = text[pos..].chars().next().map_or(1, char::len_utf8);
            if self.is_header(&text[..pos]) {
                return &text[pos + colon_len..];
            }
            return text;
        }
        if self.is_header(text) {
            ""
        } else {
            text
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateIngredient {
    pub name: CanonicalName,
    /// Indices into the extractor's input, in reading order.
    pub source_word_indices: Vec<usize>,
    pub bbox: Rect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extractor {
    pub delimiters: DelimiterSet,
    pub stoplist: StopList,
    /// Row tolerance for reading order, as a multiple of median word height.
    pub row_tolerance_multiplier: f64,
}

impl Default for Extractor {
    fn default() -> Self {
        Extractor {
            delimiters: DelimiterSet::default(),
            stoplist: crate::data::stoplist(),
            row_tolerance_multiplier: 0.5,
        }
    }
}

impl Extractor {
    pub fn new(delimiters: DelimiterSet, stoplist: StopList) -> Self {
        Extractor { delimiters, stoplist, row_tolerance_multiplier: 0.5 }
    }

    /// Input indices in row-major order: rows top to bottom, left to right
    /// within a row, ties by input index.
    pub fn reading_order(&self, words: &[WordBox]) -> Vec<usize> {
        let Ok(h) = median_height(words) else {
            return Vec::new();
        };
        group_rows(words, self.row_tolerance_multiplier * h).into_iter().flatten().collect()
    }

    pub fn extract(&self, words: &[WordBox]) -> Vec<CandidateIngredient> {
        let order = self.reading_order(words);

        let mut out = Vec::new();
        let mut fragment = String::new();
        let mut sources: Vec<usize> = Vec::new();
        let mut first = true;
        for &wi in &order {
            let text = self.stoplist.strip(words[wi].text());
            if text.is_empty() {
                continue;
            }
            if !first {
                fragment.push(' ');
            }
            first = false;
            for c in text.chars() {
                if self.delimiters.contains(c) {
                    self.flush(words, &mut fragment, &mut sources, &mut out);
                } else {
                    fragment.push(c);
                    if sources.last() != Some(&wi) {
                        sources.push(wi);
                    }
                }
            }
        }
        self.flush(words, &mut fragment, &mut sources, &mut out);
        out
    }

    fn flush(
        &self,
        words: &[WordBox],
        fragment: &mut String,
        sources: &mut Vec<usize>,
        out: &mut Vec<CandidateIngredient>,
    ) {
        if let Ok(name) = canonicalize(fragment) {
            if let Some(bbox) = sources.iter().map(|&i| words[i].bbox).reduce(|a, b| a.union(&b)) {
                out.push(CandidateIngredient { name, source_word_indices: core::mem::take(sources), bbox });
            }
        }
        fragment.clear();
        sources.clear();
    }

    /// `extract` on each line independently, concatenated in line order.
    /// Source indices refer to positions within each line.
    pub fn extract_lines(&self, lines: &[Vec<WordBox>]) -> Vec<CandidateIngredient> {
        lines.iter().flat_map(|line| self.extract(line)).collect()
    }
}

pub fn names(candidates: &[CandidateIngredient]) -> Vec<CanonicalName> {
    candidates.iter().map(|c| c.name.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn row(texts: &[&str]) -> Vec<WordBox> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| WordBox::new(t, Rect::new(60.0 * i as f64, 0.0, 50.0, 10.0).unwrap()).unwrap())
            .collect()
    }

    fn extracted(words: &[WordBox]) -> Vec<String> {
        Extractor::default().extract(words).into_iter().map(|c| c.name.into_string()).collect()
    }

    #[test]
    fn header_and_comma() {
        assert_eq!(extracted(&row(&["Ingredients:", "water,", "sugar"])), ["water", "sugar"]);
    }

    #[test]
    fn multi_word_names() {
        let words = row(&["citric", "acid,", "salt"]);
        let c = Extractor::default().extract(&words);
        assert_eq!(c[0].name.as_str(), "citric acid");
        assert_eq!(c[0].source_word_indices, vec![0, 1]);
        assert_eq!(c[0].bbox, Rect::new(0.0, 0.0, 110.0, 10.0).unwrap());
        assert_eq!(c[1].source_word_indices, vec![2]);
    }

    #[test]
    fn ideographic_comma() {
        assert_eq!(extracted(&row(&["砂糖、", "食塩"])), ["砂糖", "食塩"]);
        assert_eq!(extracted(&row(&["原材料名：砂糖、食塩"])), ["砂糖", "食塩"]);
    }

    #[test]
    fn percentages_stay_inline() {
        assert_eq!(extracted(&row(&["sugar", "(5%),", "salt"])), ["sugar (5%)", "salt"]);
    }

    #[test]
    fn full_stop_toggle() {
        let words = row(&["water.", "salt"]);
        assert_eq!(extracted(&words), ["water", "salt"]);
        let ex = Extractor::new(DelimiterSet::standard(false), StopList::default());
        assert_eq!(ex.extract(&words).len(), 1);
    }

    #[test]
    fn lines() {
        let ex = Extractor::default();
        let got = ex.extract_lines(&[row(&["water,", "sugar"])]);
        assert_eq!(names(&got), vec![canonicalize("water").unwrap(), canonicalize("sugar").unwrap()]);
        assert_eq!(ex.extract_lines(&[row(&["salt"]), row(&["salt"])]).len(), 2);
        assert!(ex.extract_lines(&[]).is_empty());
    }

    #[test]
    fn reading_order_examples() {
        let at = |x: f64, y: f64| WordBox::new("w", Rect::new(x, y, 10.0, 10.0).unwrap()).unwrap();
        let ex = Extractor::default();
        assert_eq!(ex.reading_order(&[at(50.0, 0.0), at(0.0, 0.0), at(0.0, 20.0)]), vec![1, 0, 2]);
        assert_eq!(ex.reading_order(&[at(3.0, 3.0)]), vec![0]);
        assert_eq!(ex.reading_order(&[at(3.0, 3.0), at(3.0, 3.0)]), vec![0, 1]);
    }

    #[test]
    fn delimiter_set_needs_comma() {
        assert_eq!(DelimiterSet::new([';']), Err(ExtractionError::MissingComma));
        let d: DelimiterSet = serde_json::from_str("\",;\"").unwrap();
        assert!(d.contains(';'));
    }

    #[test]
    fn stoplist_strip() {
        let s = StopList::new(["ingredients", "zutaten"]);
        assert_eq!(s.strip("ZUTATEN:"), "");
        assert_eq!(s.strip("Ingredients"), "");
        assert_eq!(s.strip("Ingredients:water"), "water");
        assert_eq!(s.strip("ratio:1"), "ratio:1");
    }

    fn word_strategy() -> impl Strategy<Value = Vec<WordBox>> {
        prop::collection::vec(("[a-z,;. ]{1,8}", 0.0..200.0f64, 0.0..200.0f64), 0..12).prop_map(|v| {
            v.into_iter().filter_map(|(t, x, y)| WordBox::new(&t, Rect::new(x, y, 20.0, 10.0).unwrap()).ok()).collect()
        })
    }

    proptest! {
        #[test]
        fn outputs_are_clean(words in word_strategy()) {
            let ex = Extractor::default();
            // words are joined with single spaces before splitting
            let input_chars: usize = words.iter().map(WordBox::char_count).sum::<usize>() + words.len().saturating_sub(1);
            let out = ex.extract(&words);
            let out_chars: usize = out.iter().map(|c| c.name.char_count()).sum();
            prop_assert!(out_chars <= input_chars);
            for c in &out {
                prop_assert!(!c.name.as_str().is_empty());
                prop_assert!(!c.name.as_str().chars().any(|ch| ex.delimiters.contains(ch)));
                prop_assert_eq!(canonicalize(c.name.as_str()).unwrap(), c.name.clone());
                prop_assert!(!c.source_word_indices.is_empty());
            }
        }

        #[test]
        fn input_order_is_irrelevant(words in word_strategy(), seed in any::<u64>()) {
            let ex = Extractor::default();
            let mut shuffled = words.clone();
            // deterministic rotation keeps the test free of extra rng plumbing
            if !shuffled.is_empty() {
                let k = (seed % shuffled.len() as u64) as usize;
                shuffled.rotate_left(k);
            }
            prop_assert_eq!(names(&ex.extract(&words)), names(&ex.extract(&shuffled)));
        }
    }
}

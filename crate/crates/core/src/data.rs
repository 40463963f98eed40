//! Bundled data files: ingredient vocabularies, the header stop-list, printed
//! headers, layout templates and the recognition confusion table.

use alloc::vec::Vec;

use crate::clustering::VocabularySet;
use crate::extraction::StopList;
use crate::synthgen::{ConfusionTable, LayoutTemplate};

/// Language tags with a bundled vocabulary.
pub const LANGUAGES: [&str; 14] = ["en", "no", "fr", "tr", "de", "sv", "ja", "da", "it", "nl", "fi", "pt", "ar", "th"];

const VOCAB_FILES: [(&str, &str); 14] = [
    ("en", include_str!("../data/vocab/en.txt")),
    ("no", include_str!("../data/vocab/no.txt")),
    ("fr", include_str!("../data/vocab/fr.txt")),
    ("tr", include_str!("../data/vocab/tr.txt")),
    ("de", include_str!("../data/vocab/de.txt")),
    ("sv", include_str!("../data/vocab/sv.txt")),
    ("ja", include_str!("../data/vocab/ja.txt")),
    ("da", include_str!("../data/vocab/da.txt")),
    ("it", include_str!("../data/vocab/it.txt")),
    ("nl", include_str!("../data/vocab/nl.txt")),
    ("fi", include_str!("../data/vocab/fi.txt")),
    ("pt", include_str!("../data/vocab/pt.txt")),
    ("ar", include_str!("../data/vocab/ar.txt")),
    ("th", include_str!("../data/vocab/th.txt")),
];

pub const STOPLIST_TXT: &str = include_str!("../data/stoplist.txt");
pub const HEADERS_TSV: &str = include_str!("../data/headers.tsv");
pub const CONFUSIONS_TXT: &str = include_str!("../data/confusions.txt");
pub const TEMPLATES_JSON: &str = include_str!("../data/templates.json");
/// Noisy C-family corpus used for the strategy ablation.
pub const ABLATION_FIXTURE_JSON: &str = include_str!("../data/fixtures/ablation_c.json");

pub fn vocabulary_text(language: &str) -> Option<&'static str> {
    VOCAB_FILES.iter().find(|(l, _)| *l == language).map(|(_, t)| *t)
}

pub fn vocabulary(language: &str) -> Option<VocabularySet> {
    vocabulary_text(language).map(|t| VocabularySet::parse(language, t))
}

/// All bundled vocabularies, in [`LANGUAGES`] order.
pub fn vocabularies() -> Vec<VocabularySet> {
    VOCAB_FILES.iter().map(|(l, t)| VocabularySet::parse(l, t)).collect()
}

pub fn stoplist() -> StopList {
    StopList::parse(STOPLIST_TXT)
}

/// Printed ingredient-list header for a language, e.g. `Zutaten:`.
pub fn header(language: &str) -> Option<&'static str> {
    HEADERS_TSV
        .lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(|l| l.split_once('\t'))
        .find(|(lang, _)| *lang == language)
        .map(|(_, h)| h.trim())
}

pub fn templates() -> Vec<LayoutTemplate> {
    serde_json::from_str(TEMPLATES_JSON).expect("bundled templates.json is valid")
}

pub fn ablation_fixture() -> crate::synthgen::CorpusSpec {
    serde_json::from_str(ABLATION_FIXTURE_JSON).expect("bundled ablation fixture parses")
}

pub fn confusions() -> ConfusionTable {
    ConfusionTable::parse(CONFUSIONS_TXT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::canonicalize;
    use crate::synthgen::Family;

    #[test]
    fn every_language_has_vocab_and_header() {
        for lang in LANGUAGES {
            let v = vocabulary(lang).unwrap();
            assert!(v.len() >= 200, "{lang}: {}", v.len());
            let h = header(lang).unwrap();
            let stripped = stoplist().strip(h);
            assert!(stripped.is_empty(), "{lang} header {h:?} not stripped");
        }
    }

    #[test]
    fn vocab_entries_have_no_delimiters_or_headers() {
        let stop = stoplist();
        let delims = crate::extraction::DelimiterSet::default();
        for v in vocabularies() {
            for e in v.entries() {
                assert!(!e.as_str().chars().any(|c| delims.contains(c)), "{e}");
                assert_eq!(stop.strip(e.as_str()), e.as_str());
                assert_eq!(&canonicalize(e.as_str()).unwrap(), e);
            }
        }
    }

    #[test]
    fn templates_cover_the_four_families() {
        let t = templates();
        assert_eq!(t.len(), 25);
        let count = |f: Family| t.iter().filter(|x| x.family == f).count();
        assert_eq!((count(Family::A), count(Family::B), count(Family::C), count(Family::D)), (7, 7, 6, 5));
        for x in &t {
            x.validate().unwrap();
        }
    }

    #[test]
    fn confusion_table_has_cited_pairs() {
        let c = confusions();
        assert!(c.targets("l").unwrap().iter().any(|t| t == "1"));
        assert!(c.targets("rn").unwrap().iter().any(|t| t == "m"));
    }
}

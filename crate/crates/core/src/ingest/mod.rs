//! Ground-truth and engine-output ingestion: COCO annotations, the normalized
//! OCR interchange document, line-to-word splitting and the stratified split.

mod coco;
mod split;

pub use coco::{
    image_key, AnnotationAttributes, CocoAnnotation, CocoCategory, CocoDataset, CocoImage, LabelBuild,
    INGREDIENT_CATEGORY,
};
pub use split::{stratified_split, Split, SplitAssignment, SplitEntry, SplitWarning};

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::{ModelError, OcrDocument, Rect, WordBox};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IngestError {
    #[error("annotations reference missing image ids {0:?}")]
    DanglingImageIds(Vec<u64>),
    #[error("duplicate image id {0}")]
    DuplicateImageId(u64),
    #[error("annotation {annotation_id}: invalid bbox {bbox:?}")]
    InvalidBbox { annotation_id: u64, bbox: [f64; 4] },
    #[error("annotation {annotation_id}: ingredient name is empty")]
    EmptyName { annotation_id: u64 },
    #[error("image {0} has no language attribute")]
    MissingLanguage(u64),
    #[error("test fraction {0} must lie strictly between 0 and 1")]
    InvalidFraction(f64),
    #[error("item {index}: {source}")]
    InvalidItem { index: usize, source: ModelError },
    #[error("document declares {declared:?} granularity but item {index} is {found:?}")]
    MixedGranularity { declared: Granularity, found: Granularity, index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Word,
    Line,
}

/// One item of the interchange document: a word or a line, depending on granularity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OcrItem {
    pub text: String,
    pub bbox: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_id: Option<u32>,
    /// Per-item override; when present it must agree with the document granularity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub granularity: Option<Granularity>,
}

/// The normalized-OCR interchange document written by engine adapters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineOutput {
    pub image_id: String,
    pub engine_id: String,
    pub granularity: Granularity,
    pub items: Vec<OcrItem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_size: Option<[f64; 2]>,
}

impl EngineOutput {
    /// Word-level interchange form of a document.
    pub fn from_document(doc: &OcrDocument) -> Self {
        EngineOutput {
            image_id: doc.image_id.clone(),
            engine_id: doc.engine_id.clone(),
            granularity: Granularity::Word,
            items: doc
                .words
                .iter()
                .map(|w| OcrItem {
                    text: String::from(w.text()),
                    bbox: w.bbox.into(),
                    confidence: w.confidence,
                    line_id: w.line_id,
                    granularity: None,
                })
                .collect(),
            image_size: doc.image_size.map(|(w, h)| [w, h]),
        }
    }
}

/// Splits a recognized line into word boxes.
///
/// Each token gets a horizontal slice of the line box proportional to its
/// code-point count; every single separating space counts as one code-point
/// slot of gap. All words keep the line's `y` and height.
pub fn lines_to_words(line_text: &str, line_bbox: Rect) -> Vec<WordBox> {
    let tokens: Vec<&str> = line_text.split_whitespace().collect();
    if tokens.is_empty() {
        return Vec::new();
    }
    if tokens.len() == 1 {
        return WordBox::new(tokens[0], line_bbox).into_iter().collect();
    }
    let counts: Vec<usize> = tokens.iter().map(|t| t.chars().count()).collect();
    let slots = (counts.iter().sum::<usize>() + tokens.len() - 1) as f64;
    let edge = |slot: usize| -> f64 {
        if slot as f64 >= slots {
            line_bbox.right()
        } else {
            line_bbox.x + line_bbox.width * (slot as f64 / slots)
        }
    };

    let mut words = Vec::with_capacity(tokens.len());
    let mut cursor = 0usize;
    for (token, count) in tokens.iter().zip(&counts) {
        let left = edge(cursor);
        let right = edge(cursor + count);
        let bbox = Rect { x: left, y: line_bbox.y, width: right - left, height: line_bbox.height };
        // tokens from split_whitespace are non-empty, so construction cannot fail
        if let Ok(w) = WordBox::new(token, bbox) {
            words.push(w);
        }
        cursor += count + 1;
    }
    words
}

/// Converts an interchange document into a word-level [`OcrDocument`].
pub fn normalize_engine_output(raw: &EngineOutput) -> Result<OcrDocument, IngestError> {
    let mut words = Vec::new();
    for (index, item) in raw.items.iter().enumerate() {
        if let Some(found) = item.granularity {
            if found != raw.granularity {
                return Err(IngestError::MixedGranularity { declared: raw.granularity, found, index });
            }
        }
        let invalid = |source| IngestError::InvalidItem { index, source };
        let bbox = Rect::try_from(item.bbox).map_err(invalid)?;
        match raw.granularity {
            Granularity::Word => {
                let word = WordBox::new(&item.text, bbox)
                    .and_then(|w| w.with_confidence(item.confidence))
                    .map_err(invalid)?
                    .with_line_id(item.line_id);
                words.push(word);
            }
            Granularity::Line => {
                let line_id = item.line_id.unwrap_or(index as u32);
                for w in lines_to_words(&item.text, bbox) {
                    let w = w.with_confidence(item.confidence).map_err(invalid)?.with_line_id(Some(line_id));
                    words.push(w);
                }
            }
        }
    }
    let mut doc = OcrDocument::new(raw.image_id.clone(), raw.engine_id.clone(), words);
    doc.image_size = raw.image_size.map(|[w, h]| (w, h));
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn rect(x: f64, y: f64, w: f64, h: f64) -> Rect {
        Rect::new(x, y, w, h).unwrap()
    }

    fn widths(words: &[WordBox]) -> Vec<f64> {
        words.iter().map(|w| w.bbox.width).collect()
    }

    #[test]
    fn two_words_split_evenly_with_one_gap() {
        let words = lines_to_words("water sugar", rect(0.0, 0.0, 110.0, 10.0));
        assert_eq!(words.len(), 2);
        assert!(widths(&words).iter().all(|w| (w - 50.0).abs() < 1e-9));
        assert!((words[1].bbox.x - words[0].bbox.right() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn single_token_keeps_line_box() {
        let b = rect(5.0, 5.0, 40.0, 8.0);
        let words = lines_to_words("salt", b);
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].bbox, b);
    }

    #[test]
    fn widths_follow_code_point_counts() {
        // 1 + 2 + 3 code points and two single-space gaps: 8 slots of 10 px
        let words = lines_to_words("a bb ccc", rect(0.0, 0.0, 80.0, 10.0));
        assert_eq!(widths(&words), vec![10.0, 20.0, 30.0]);
        assert_eq!(words[0].bbox.x, 0.0);
        assert_eq!(words[1].bbox.x, 20.0);
        assert_eq!(words[2].bbox.x, 50.0);
    }

    #[test]
    fn whitespace_line_gives_nothing() {
        assert!(lines_to_words("  \t ", rect(0.0, 0.0, 10.0, 10.0)).is_empty());
    }

    fn item(text: &str, bbox: [f64; 4]) -> OcrItem {
        OcrItem { text: text.to_string(), bbox, confidence: None, line_id: None, granularity: None }
    }

    #[test]
    fn word_level_is_identity() {
        let raw = EngineOutput {
            image_id: "img".into(),
            engine_id: "e".into(),
            granularity: Granularity::Word,
            items: vec![
                item("water", [0.0, 0.0, 10.0, 5.0]),
                item("sugar", [12.0, 0.0, 10.0, 5.0]),
                item("salt", [24.0, 0.0, 8.0, 5.0]),
            ],
            image_size: None,
        };
        let doc = normalize_engine_output(&raw).unwrap();
        let texts: Vec<_> = doc.words.iter().map(|w| w.text()).collect();
        assert_eq!(texts, vec!["water", "sugar", "salt"]);
        assert_eq!(doc.words[2].bbox, rect(24.0, 0.0, 8.0, 5.0));
        assert_eq!(EngineOutput::from_document(&doc), raw);
    }

    #[test]
    fn line_level_keeps_punctuation_and_line_id() {
        let mut line = item("water, sugar", [0.0, 0.0, 120.0, 10.0]);
        line.line_id = Some(7);
        let raw = EngineOutput {
            image_id: "img".into(),
            engine_id: "e".into(),
            granularity: Granularity::Line,
            items: vec![line],
            image_size: Some([200.0, 100.0]),
        };
        let doc = normalize_engine_output(&raw).unwrap();
        let texts: Vec<_> = doc.words.iter().map(|w| w.text()).collect();
        assert_eq!(texts, vec!["water,", "sugar"]);
        assert!(doc.words.iter().all(|w| w.line_id == Some(7)));
        assert_eq!(doc.image_size, Some((200.0, 100.0)));
    }

    #[test]
    fn empty_items_give_empty_document() {
        let raw = EngineOutput {
            image_id: "img".into(),
            engine_id: "e".into(),
            granularity: Granularity::Line,
            items: vec![],
            image_size: None,
        };
        assert!(normalize_engine_output(&raw).unwrap().words.is_empty());
    }

    #[test]
    fn mixed_granularity_is_rejected() {
        let mut line = item("water sugar", [0.0, 0.0, 120.0, 10.0]);
        line.granularity = Some(Granularity::Line);
        let raw = EngineOutput {
            image_id: "img".into(),
            engine_id: "e".into(),
            granularity: Granularity::Word,
            items: vec![item("salt", [0.0, 20.0, 10.0, 10.0]), line],
            image_size: None,
        };
        assert_eq!(
            normalize_engine_output(&raw),
            Err(IngestError::MixedGranularity { declared: Granularity::Word, found: Granularity::Line, index: 1 })
        );
    }

    #[test]
    fn bad_boxes_are_reported_by_index() {
        let raw = EngineOutput {
            image_id: "img".into(),
            engine_id: "e".into(),
            granularity: Granularity::Word,
            items: vec![item("salt", [0.0, 0.0, 10.0, 10.0]), item("x", [0.0, 0.0, 0.0, 10.0])],
            image_size: None,
        };
        assert!(matches!(normalize_engine_output(&raw), Err(IngestError::InvalidItem { index: 1, .. })));
    }

    proptest! {
        #[test]
        fn split_reassembles_and_fills_the_line(
            tokens in proptest::collection::vec("[a-zé水]{1,8}", 1..8),
            seps in proptest::collection::vec(" {1,3}", 8),
            width in 1.0f64..2000.0,
        ) {
            let mut line = String::new();
            for (i, t) in tokens.iter().enumerate() {
                if i > 0 { line.push_str(&seps[i]); }
                line.push_str(t);
            }
            let words = lines_to_words(&line, rect(3.0, 4.0, width, 12.0));
            let joined: Vec<&str> = words.iter().map(|w| w.text()).collect();
            prop_assert_eq!(joined.join(" "), tokens.join(" "));

            let total: usize = tokens.iter().map(|t| t.chars().count()).sum::<usize>() + tokens.len() - 1;
            let unit = width / total as f64;
            let word_sum: f64 = words.iter().map(|w| w.bbox.width).sum();
            let gap_sum = unit * (tokens.len() - 1) as f64;
            prop_assert!(((word_sum + gap_sum) - width).abs() <= 1e-9 * width);
            prop_assert!((words.last().unwrap().bbox.right() - (3.0 + width)).abs() <= 1e-9 * width);
            for w in &words {
                prop_assert!(w.bbox.x >= 3.0 - 1e-9 && w.bbox.right() <= 3.0 + width + 1e-9);
                prop_assert_eq!(w.bbox.y, 4.0);
                prop_assert_eq!(w.bbox.height, 12.0);
            }
        }
    }
}

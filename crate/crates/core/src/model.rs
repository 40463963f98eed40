//! Domain types shared across the pipeline.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use icu_casemap::CaseMapper;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

/// Slack allowed when checking word boxes against the image bounds.
pub const BOUNDS_TOLERANCE_PX: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("name is empty after trimming")]
    EmptyName,
    #[error("word text is empty after trimming")]
    EmptyText,
    #[error("rectangle must have finite coordinates and positive extent (got {width}x{height})")]
    InvalidRect { width: f64, height: f64 },
    #[error("confidence {0} outside [0, 1]")]
    InvalidConfidence(f64),
    #[error("word {index} ({text:?}) lies outside the {width}x{height} image")]
    OutOfBounds { index: usize, text: String, width: f64, height: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }
}

/// Axis-aligned rectangle in pixels. The origin may be negative; the extent may not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, width: f64, height: f64) -> Result<Self, ModelError> {
        let finite = x.is_finite() && y.is_finite() && width.is_finite() && height.is_finite();
        if !finite || width <= 0.0 || height <= 0.0 {
            return Err(ModelError::InvalidRect { width, height });
        }
        Ok(Rect { x, y, width, height })
    }

    pub fn right(&self) -> f64 {
        self.x + self.width
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.height
    }

    pub fn centroid(&self) -> Point {
        centroid(self)
    }

    /// Smallest rectangle containing both.
    pub fn union(&self, other: &Rect) -> Rect {
        let x = self.x.min(other.x);
        let y = self.y.min(other.y);
        Rect { x, y, width: self.right().max(other.right()) - x, height: self.bottom().max(other.bottom()) - y }
    }

    pub fn contains_rect(&self, other: &Rect, slack: f64) -> bool {
        other.x >= self.x - slack
            && other.y >= self.y - slack
            && other.right() <= self.right() + slack
            && other.bottom() <= self.bottom() + slack
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Rect {
        Rect { x: self.x + dx, y: self.y + dy, ..*self }
    }

    pub fn scaled(&self, s: f64) -> Rect {
        Rect { x: self.x * s, y: self.y * s, width: self.width * s, height: self.height * s }
    }
}

impl TryFrom<[f64; 4]> for Rect {
    type Error = ModelError;

    fn try_from(v: [f64; 4]) -> Result<Self, Self::Error> {
        Rect::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Rect> for [f64; 4] {
    fn from(r: Rect) -> Self {
        [r.x, r.y, r.width, r.height]
    }
}

/// Midpoint of a rectangle.
pub fn centroid(rect: &Rect) -> Point {
    Point { x: rect.x + rect.width / 2.0, y: rect.y + rect.height / 2.0 }
}

/// One recognized word with its box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordBox {
    text: String,
    pub bbox: Rect,
    pub confidence: Option<f64>,
    pub line_id: Option<u32>,
}

impl WordBox {
    pub fn new(text: &str, bbox: Rect) -> Result<Self, ModelError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(ModelError::EmptyText);
        }
        Ok(WordBox { text: text.to_string(), bbox, confidence: None, line_id: None })
    }

    pub fn with_confidence(mut self, confidence: Option<f64>) -> Result<Self, ModelError> {
        if let Some(c) = confidence {
            if !(0.0..=1.0).contains(&c) {
                return Err(ModelError::InvalidConfidence(c));
            }
        }
        self.confidence = confidence;
        Ok(self)
    }

    pub fn with_line_id(mut self, line_id: Option<u32>) -> Self {
        self.line_id = line_id;
        self
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn centroid(&self) -> Point {
        self.bbox.centroid()
    }

    pub fn char_count(&self) -> usize {
        self.text.chars().count()
    }
}

/// Word-level engine output for one image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcrDocument {
    pub image_id: String,
    pub engine_id: String,
    pub words: Vec<WordBox>,
    pub image_size: Option<(f64, f64)>,
}

impl OcrDocument {
    pub fn new(image_id: impl Into<String>, engine_id: impl Into<String>, words: Vec<WordBox>) -> Self {
        OcrDocument { image_id: image_id.into(), engine_id: engine_id.into(), words, image_size: None }
    }

    pub fn with_image_size(mut self, width: f64, height: f64) -> Self {
        self.image_size = Some((width, height));
        self
    }

    /// Checks that every box lies inside the image, with [`BOUNDS_TOLERANCE_PX`] of slack.
    pub fn validate(&self) -> Result<(), ModelError> {
        let Some((width, height)) = self.image_size else {
            return Ok(());
        };
        let page = Rect { x: 0.0, y: 0.0, width, height };
        for (index, w) in self.words.iter().enumerate() {
            if !page.contains_rect(&w.bbox, BOUNDS_TOLERANCE_PX) {
                return Err(ModelError::OutOfBounds { index, text: w.text.clone(), width, height });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSource {
    #[default]
    Real,
    Synthetic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthIngredient {
    pub name: String,
    pub bbox: Rect,
}

/// Ingredient annotations for one image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthLabel {
    pub image_id: String,
    pub language: String,
    pub ingredients: Vec<TruthIngredient>,
    pub source: LabelSource,
}

impl GroundTruthLabel {
    /// Canonical forms of the annotated names, in annotation order.
    pub fn canonical_names(&self) -> Vec<CanonicalName> {
        self.ingredients.iter().filter_map(|i| canonicalize(&i.name).ok()).collect()
    }
}

/// NFC form of a trimmed string, without case folding.
pub fn nfc(s: &str) -> String {
    s.trim().nfc().collect()
}

/// Trimmed, case-folded, NFC-normalized name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalName(String);

impl CanonicalName {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn char_count(&self) -> usize {
        self.0.chars().count()
    }
}

impl fmt::Display for CanonicalName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for CanonicalName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn fold_nfc(s: &str) -> String {
    let folded = CaseMapper::new().fold_string(s);
    folded.nfc().collect()
}

/// Canonicalizes a name: trim, full Unicode case folding, then NFC.
///
/// Folding runs before composition. A handful of code points fold into
/// sequences that compose differently, so the fold/NFC pair is repeated until
/// it reaches a fixed point; this keeps the function idempotent.
pub fn canonicalize(raw: &str) -> Result<CanonicalName, ModelError> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(ModelError::EmptyName);
    }
    let mut current = fold_nfc(trimmed);
    for _ in 0..4 {
        let next = fold_nfc(current.trim());
        if next == current {
            break;
        }
        current = next;
    }
    let current = current.trim();
    if current.is_empty() {
        return Err(ModelError::EmptyName);
    }
    Ok(CanonicalName(current.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonicalize_trims_and_folds() {
        assert_eq!(canonicalize("  Gelatin ").unwrap().as_str(), "gelatin");
    }

    #[test]
    fn canonicalize_composes_nfd_input() {
        let nfd = "E\u{0301}330";
        assert_eq!(canonicalize(nfd).unwrap().as_str(), "\u{00e9}330");
    }

    #[test]
    fn canonicalize_rejects_empty() {
        assert_eq!(canonicalize(""), Err(ModelError::EmptyName));
        assert_eq!(canonicalize(" \t\n"), Err(ModelError::EmptyName));
    }

    #[test]
    fn full_folding_is_not_lowercasing() {
        assert_eq!(canonicalize("Straße").unwrap().as_str(), "strasse");
        assert_eq!(canonicalize("İçindekiler").unwrap().as_str(), "i\u{307}çindekiler");
        assert_eq!(canonicalize("ΣΑΣ").unwrap(), canonicalize("σας").unwrap());
    }

    #[test]
    fn centroid_examples() {
        let c = centroid(&Rect::new(0.0, 0.0, 10.0, 4.0).unwrap());
        assert_eq!((c.x, c.y), (5.0, 2.0));
        let c = centroid(&Rect::new(3.0, 7.0, 1.0, 1.0).unwrap());
        assert_eq!((c.x, c.y), (3.5, 7.5));
        let c = centroid(&Rect::new(-2.0, 0.0, 4.0, 2.0).unwrap());
        assert_eq!((c.x, c.y), (0.0, 1.0));
    }

    #[test]
    fn rect_rejects_degenerate_extent() {
        assert!(Rect::new(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(Rect::new(0.0, 0.0, 1.0, -1.0).is_err());
        assert!(Rect::new(f64::NAN, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn word_text_is_trimmed() {
        let r = Rect::new(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(WordBox::new("  salt ", r).unwrap().text(), "salt");
        assert_eq!(WordBox::new("  ", r), Err(ModelError::EmptyText));
        assert!(WordBox::new("x", r).unwrap().with_confidence(Some(1.5)).is_err());
    }

    #[test]
    fn document_bounds_allow_two_pixels() {
        let inside = WordBox::new("a", Rect::new(-1.5, 0.0, 10.0, 10.0).unwrap()).unwrap();
        let doc = OcrDocument::new("i", "e", alloc::vec![inside]).with_image_size(10.0, 10.0);
        assert!(doc.validate().is_ok());
        let outside = WordBox::new("b", Rect::new(5.0, 5.0, 10.0, 10.0).unwrap()).unwrap();
        let doc = OcrDocument::new("i", "e", alloc::vec![outside]).with_image_size(10.0, 10.0);
        assert!(matches!(doc.validate(), Err(ModelError::OutOfBounds { index: 0, .. })));
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(s in "\\PC{0,24}") {
            if let Ok(once) = canonicalize(&s) {
                let twice = canonicalize(once.as_str()).unwrap();
                prop_assert_eq!(once, twice);
            }
        }

        #[test]
        fn centroid_lies_inside(x in -1e4f64..1e4, y in -1e4f64..1e4, w in 1e-3f64..1e4, h in 1e-3f64..1e4) {
            let r = Rect::new(x, y, w, h).unwrap();
            let c = r.centroid();
            prop_assert!(c.x >= r.x && c.x <= r.right());
            prop_assert!(c.y >= r.y && c.y <= r.bottom());
        }
    }
}

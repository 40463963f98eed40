use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::model::{nfc, GroundTruthLabel, LabelSource, Rect, TruthIngredient};

pub const INGREDIENT_CATEGORY: &str = "ingredient";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocoImage {
    pub id: u64,
    pub file_name: String,
    pub width: u32,
    pub height: u32,
    /// Image-level mirror of the annotation language; wins on conflict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<LabelSource>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationAttributes {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocoAnnotation {
    pub id: u64,
    pub image_id: u64,
    #[serde(default = "default_category")]
    pub category_id: u64,
    pub bbox: [f64; 4],
    #[serde(default)]
    pub area: f64,
    #[serde(default)]
    pub iscrowd: u8,
    pub attributes: AnnotationAttributes,
}

fn default_category() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocoCategory {
    pub id: u64,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supercategory: Option<String>,
}

/// COCO object-detection document restricted to what ingredient labels use.
/// Unknown top-level keys (`info`, `licenses`, ...) are ignored on input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocoDataset {
    pub images: Vec<CocoImage>,
    pub annotations: Vec<CocoAnnotation>,
    #[serde(default)]
    pub categories: Vec<CocoCategory>,
}

/// Ground-truth labels built from a dataset, plus any language conflicts seen.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelBuild {
    pub labels: Vec<GroundTruthLabel>,
    pub warnings: Vec<String>,
}

/// Key used to join an image with OCR documents: the file name without directories or extension.
pub fn image_key(file_name: &str) -> String {
    let base = file_name.rsplit(['/', '\\']).next().unwrap_or(file_name);
    match base.rfind('.') {
        Some(dot) if dot > 0 => base[..dot].to_string(),
        _ => base.to_string(),
    }
}

impl CocoDataset {
    /// Structural checks: unique image ids, referential integrity, positive boxes, non-empty names.
    pub fn validate(&self) -> Result<(), IngestError> {
        let mut ids = BTreeSet::new();
        for img in &self.images {
            if !ids.insert(img.id) {
                return Err(IngestError::DuplicateImageId(img.id));
            }
        }
        let dangling: BTreeSet<u64> =
            self.annotations.iter().map(|a| a.image_id).filter(|id| !ids.contains(id)).collect();
        if !dangling.is_empty() {
            return Err(IngestError::DanglingImageIds(dangling.into_iter().collect()));
        }
        for ann in &self.annotations {
            let [x, y, w, h] = ann.bbox;
            let ok = ann.bbox.iter().all(|v| v.is_finite()) && x >= 0.0 && y >= 0.0 && w > 0.0 && h > 0.0;
            if !ok {
                return Err(IngestError::InvalidBbox { annotation_id: ann.id, bbox: ann.bbox });
            }
            if ann.attributes.name.trim().is_empty() {
                return Err(IngestError::EmptyName { annotation_id: ann.id });
            }
        }
        Ok(())
    }

    /// Resolved language per image id. Image-level language wins over
    /// annotation attributes; otherwise the most frequent annotation language
    /// (ties to the alphabetically first) is used.
    pub fn image_languages(&self) -> (BTreeMap<u64, Option<String>>, Vec<String>) {
        let mut counts: BTreeMap<u64, BTreeMap<&str, usize>> = BTreeMap::new();
        for ann in &self.annotations {
            if let Some(lang) = ann.attributes.language.as_deref() {
                *counts.entry(ann.image_id).or_default().entry(lang).or_default() += 1;
            }
        }
        let mut warnings = Vec::new();
        let mut out = BTreeMap::new();
        for img in &self.images {
            let from_annotations = counts
                .get(&img.id)
                .and_then(|c| c.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map(|(l, _)| l.to_string()));
            let resolved = match (&img.language, from_annotations) {
                (Some(image_lang), Some(ann_lang)) => {
                    if counts[&img.id].keys().any(|l| *l != image_lang) {
                        warnings.push(alloc::format!(
                            "image {}: annotation language {:?} conflicts with image language {:?}; using image language",
                            img.id, ann_lang, image_lang
                        ));
                    }
                    Some(image_lang.clone())
                }
                (Some(image_lang), None) => Some(image_lang.clone()),
                (None, ann_lang) => ann_lang,
            };
            out.insert(img.id, resolved);
        }
        (out, warnings)
    }

    /// Builds one label per image, in image order. Names are trimmed and NFC-normalized.
    pub fn to_labels(&self) -> Result<LabelBuild, IngestError> {
        self.validate()?;
        let (languages, warnings) = self.image_languages();
        let mut by_image: BTreeMap<u64, Vec<TruthIngredient>> = BTreeMap::new();
        for ann in &self.annotations {
            let [x, y, w, h] = ann.bbox;
            let bbox = Rect { x, y, width: w, height: h };
            by_image.entry(ann.image_id).or_default().push(TruthIngredient { name: nfc(&ann.attributes.name), bbox });
        }
        let mut labels = Vec::with_capacity(self.images.len());
        for img in &self.images {
            let language = languages.get(&img.id).cloned().flatten().ok_or(IngestError::MissingLanguage(img.id))?;
            labels.push(GroundTruthLabel {
                image_id: image_key(&img.file_name),
                language,
                ingredients: by_image.remove(&img.id).unwrap_or_default(),
                source: img.source.unwrap_or_default(),
            });
        }
        Ok(LabelBuild { labels, warnings })
    }

    /// Inverse of [`CocoDataset::to_labels`] for generated labels; image ids are assigned 1..=n.
    pub fn from_labels<'a>(labels: impl IntoIterator<Item = (&'a GroundTruthLabel, (u32, u32))>) -> Self {
        let mut images = Vec::new();
        let mut annotations = Vec::new();
        let mut next_ann = 1u64;
        for (i, (label, (width, height))) in labels.into_iter().enumerate() {
            let id = i as u64 + 1;
            images.push(CocoImage {
                id,
                file_name: alloc::format!("{}.png", label.image_id),
                width,
                height,
                language: Some(label.language.clone()),
                source: Some(label.source),
            });
            for ing in &label.ingredients {
                annotations.push(CocoAnnotation {
                    id: next_ann,
                    image_id: id,
                    category_id: 1,
                    bbox: ing.bbox.into(),
                    area: ing.bbox.width * ing.bbox.height,
                    iscrowd: 0,
                    attributes: AnnotationAttributes { name: ing.name.clone(), language: Some(label.language.clone()) },
                });
                next_ann += 1;
            }
        }
        CocoDataset {
            images,
            annotations,
            categories: alloc::vec![CocoCategory { id: 1, name: INGREDIENT_CATEGORY.to_string(), supercategory: None }],
        }
    }
}

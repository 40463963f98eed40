use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::{CocoDataset, IngestError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitEntry {
    pub image_id: u64,
    pub file_name: String,
    pub language: String,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitWarning {
    pub language: String,
    pub image_id: u64,
    pub message: String,
}

/// Train/test assignment, sorted by image id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub entries: Vec<SplitEntry>,
    pub seed: u64,
    pub test_fraction: f64,
    pub warnings: Vec<SplitWarning>,
}

impl SplitAssignment {
    pub fn get(&self, image_id: u64) -> Option<Split> {
        self.entries.binary_search_by_key(&image_id, |e| e.image_id).ok().map(|i| self.entries[i].split)
    }

    /// (train, test) counts per language.
    pub fn counts_by_language(&self) -> BTreeMap<&str, (usize, usize)> {
        let mut out: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for e in &self.entries {
            let c = out.entry(e.language.as_str()).or_default();
            match e.split {
                Split::Train => c.0 += 1,
                Split::Test => c.1 += 1,
            }
        }
        out
    }
}

/// Stratified train/test split by image language.
///
/// Strata are visited in language order and image ids are sorted inside each
/// stratum, so the result does not depend on the input order. One
/// Xoshiro256++ stream seeded with `seed` shuffles every stratum in turn; the
/// first `round(test_fraction * n)` shuffled ids go to test. A stratum with a
/// single image goes to train and is reported in `warnings`.
pub fn stratified_split(dataset: &CocoDataset, seed: u64, test_fraction: f64) -> Result<SplitAssignment, IngestError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(IngestError::InvalidFraction(test_fraction));
    }
    let (languages, _) = dataset.image_languages();
    let mut strata: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for img in &dataset.images {
        let lang = languages.get(&img.id).cloned().flatten().ok_or(IngestError::MissingLanguage(img.id))?;
        strata.entry(lang).or_default().push(img.id);
    }

    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut assigned: BTreeMap<u64, (String, Split)> = BTreeMap::new();
    let mut warnings = Vec::new();
    for (lang, mut ids) in strata {
        ids.sort_unstable();
        if ids.len() == 1 {
            warnings.push(SplitWarning {
                language: lang.clone(),
                image_id: ids[0],
                message: String::from("stratum has a single image; assigned to train"),
            });
            assigned.insert(ids[0], (lang, Split::Train));
            continue;
        }
        let n_test = (libm::round(test_fraction * ids.len() as f64) as usize).min(ids.len());
        ids.shuffle(&mut rng);
        for (k, id) in ids.into_iter().enumerate() {
            let split = if k < n_test { Split::Test } else { Split::Train };
            assigned.insert(id, (lang.clone(), split));
        }
    }

    let file_names: BTreeMap<u64, &str> = dataset.images.iter().map(|i| (i.id, i.file_name.as_str())).collect();
    let entries = assigned
        .into_iter()
        .map(|(image_id, (language, split))| SplitEntry {
            image_id,
            file_name: String::from(file_names[&image_id]),
            language,
            split,
        })
        .collect();
    Ok(SplitAssignment { entries, seed, test_fraction, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::CocoImage;
    use alloc::format;
    use alloc::vec;

    fn dataset(langs: &[(&str, usize)]) -> CocoDataset {
        let mut images = Vec::new();
        let mut id = 1;
        for (lang, n) in langs {
            for _ in 0..*n {
                images.push(CocoImage {
                    id,
                    file_name: format!("{id}.jpg"),
                    width: 10,
                    height: 10,
                    language: Some((*lang).into()),
                    source: None,
                });
                id += 1;
            }
        }
        CocoDataset { images, annotations: vec![], categories: vec![] }
    }

    #[test]
    fn ten_images_twenty_percent() {
        let s = stratified_split(&dataset(&[("en", 10)]), 42, 0.2).unwrap();
        assert_eq!(s.counts_by_language()["en"], (8, 2));
    }

    #[test]
    fn repeated_calls_agree() {
        let ds = dataset(&[("en", 13), ("fr", 7), ("ja", 3)]);
        assert_eq!(stratified_split(&ds, 42, 0.2).unwrap(), stratified_split(&ds, 42, 0.2).unwrap());
    }

    #[test]
    fn one_test_image_per_language() {
        let s = stratified_split(&dataset(&[("en", 5), ("fr", 5)]), 42, 0.2).unwrap();
        assert_eq!(s.counts_by_language()["en"].1, 1);
        assert_eq!(s.counts_by_language()["fr"].1, 1);
    }

    #[test]
    fn singleton_stratum_goes_to_train_with_warning() {
        let s = stratified_split(&dataset(&[("en", 4), ("da", 1)]), 42, 0.5).unwrap();
        assert_eq!(s.counts_by_language()["da"], (1, 0));
        assert_eq!(s.warnings.len(), 1);
        assert_eq!(s.warnings[0].language, "da");
    }

    #[test]
    fn fraction_must_be_open_interval() {
        let ds = dataset(&[("en", 4)]);
        assert_eq!(stratified_split(&ds, 1, 1.0), Err(IngestError::InvalidFraction(1.0)));
        assert_eq!(stratified_split(&ds, 1, 0.0), Err(IngestError::InvalidFraction(0.0)));
    }

    #[test]
    fn input_order_does_not_matter() {
        let ds = dataset(&[("en", 9), ("tr", 6), ("de", 4)]);
        let mut reversed = ds.clone();
        reversed.images.reverse();
        assert_eq!(stratified_split(&ds, 7, 0.25).unwrap(), stratified_split(&reversed, 7, 0.25).unwrap());
    }

    #[test]
    fn missing_language_fails() {
        let mut ds = dataset(&[("en", 2)]);
        ds.images[1].language = None;
        assert_eq!(stratified_split(&ds, 1, 0.5), Err(IngestError::MissingLanguage(2)));
    }
}

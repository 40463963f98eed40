//! Recognition noise applied to ideal word boxes.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::{Family, SynthError, SyntheticLabel};
use crate::model::{OcrDocument, WordBox};

/// Delimiters subject to corruption. The full stop is what they degrade into.
const CORRUPTIBLE: [char; 5] = [',', ';', '\u{3001}', '\u{060C}', '\u{00B7}'];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub char_substitution_rate: f64,
    /// Small-font degradation.
    pub word_drop_rate: f64,
    /// Each delimiter becomes a full stop or disappears, with equal odds.
    pub delimiter_corruption_rate: f64,
    /// Cross-column word merges, C family only.
    pub panel_merge_rate: f64,
    /// Peak sinusoidal y displacement in pixels.
    pub curvature_amplitude: f64,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            char_substitution_rate: 0.0,
            word_drop_rate: 0.0,
            delimiter_corruption_rate: 0.0,
            panel_merge_rate: 0.0,
            curvature_amplitude: 0.0,
            seed: 0,
        }
    }
}

/// Named failure modes with a representative noise setting each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorMode {
    CjkRecognition,
    SmallFont,
    CurvedSurface,
    PanelConfusion,
    DelimiterMisrecognition,
}

impl NoiseConfig {
    pub fn zero(seed: u64) -> Self {
        NoiseConfig { seed, ..Default::default() }
    }

    pub fn preset(mode: ErrorMode, seed: u64) -> Self {
        let base = Self::zero(seed);
        match mode {
            ErrorMode::CjkRecognition => NoiseConfig { char_substitution_rate: 0.15, word_drop_rate: 0.1, ..base },
            ErrorMode::SmallFont => NoiseConfig { word_drop_rate: 0.3, char_substitution_rate: 0.05, ..base },
            ErrorMode::CurvedSurface => NoiseConfig { curvature_amplitude: 20.0, ..base },
            ErrorMode::PanelConfusion => NoiseConfig { panel_merge_rate: 0.3, ..base },
            ErrorMode::DelimiterMisrecognition => NoiseConfig { delimiter_corruption_rate: 0.5, ..base },
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let rates = [
            ("char_substitution_rate", self.char_substitution_rate),
            ("word_drop_rate", self.word_drop_rate),
            ("delimiter_corruption_rate", self.delimiter_corruption_rate),
            ("panel_merge_rate", self.panel_merge_rate),
        ];
        for (name, r) in rates {
            if !(0.0..=1.0).contains(&r) {
                return Err(SynthError::InvalidNoise { field: name, value: r });
            }
        }
        if !(self.curvature_amplitude.is_finite() && self.curvature_amplitude >= 0.0) {
            return Err(SynthError::InvalidNoise { field: "curvature_amplitude", value: self.curvature_amplitude });
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.char_substitution_rate == 0.0
            && self.word_drop_rate == 0.0
            && self.delimiter_corruption_rate == 0.0
            && self.panel_merge_rate == 0.0
            && self.curvature_amplitude == 0.0
    }
}

/// Source string to possible replacements.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConfusionTable {
    map: BTreeMap<Vec<char>, Vec<String>>,
    longest: usize,
}

impl ConfusionTable {
    /// Lines of `source<TAB>replacement`; `#` starts a comment line.
    pub fn parse(text: &str) -> Self {
        let mut table = ConfusionTable::default();
        for line in text.lines() {
            if line.starts_with('#') {
                continue;
            }
            if let Some((from, to)) = line.split_once('\t') {
                if from.is_empty() || to.is_empty() {
                    continue;
                }
                let key: Vec<char> = from.chars().collect();
                table.longest = table.longest.max(key.len());
                table.map.entry(key).or_default().push(to.into());
            }
        }
        table
    }

    pub fn targets(&self, source: &str) -> Option<&[String]> {
        let key: Vec<char> = source.chars().collect();
        self.map.get(&key).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    // longest source matching at `i`
    fn lookup(&self, chars: &[char], i: usize) -> Option<(usize, &[String])> {
        (1..=self.longest.min(chars.len() - i))
            .rev()
            .find_map(|n| self.map.get(&chars[i..i + n]).map(|t| (n, t.as_slice())))
    }

    /// Each position with a known confusion is replaced with probability `rate`.
    pub fn substitute<R: Rng>(&self, text: &str, rate: f64, rng: &mut R) -> String {
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::with_capacity(text.len());
        let mut i = 0;
        while i < chars.len() {
            match self.lookup(&chars, i) {
                Some((n, targets)) if rng.random::<f64>() < rate => {
                    out.push_str(&targets[rng.random_range(0..targets.len())]);
                    i += n;
                }
                _ => {
                    out.push(chars[i]);
                    i += 1;
                }
            }
        }
        out
    }
}

fn corrupt_delimiters<R: Rng>(text: &str, rate: f64, rng: &mut R) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        if CORRUPTIBLE.contains(&c) && rng.random::<f64>() < rate {
            if rng.random::<bool>() {
                out.push('.');
            }
        } else {
            out.push(c);
        }
    }
    out
}

struct Work {
    text: String,
    word: WordBox,
    panel: Option<u32>,
    line: u32,
}

fn merge_panels<R: Rng>(words: &mut Vec<Work>, rate: f64, rng: &mut R) {
    let panels = words.iter().filter_map(|w| w.panel).max().map_or(0, |p| p + 1);
    let mut absorbed = alloc::vec![false; words.len()];
    for p in 0..panels.saturating_sub(1) {
        // rightmost word of each line of panel p, leftmost of each line of panel p + 1
        let edge = |panel: u32, right: bool| {
            let mut best: BTreeMap<u32, usize> = BTreeMap::new();
            for (i, w) in words.iter().enumerate().filter(|(_, w)| w.panel == Some(panel)) {
                let e = best.entry(w.line).or_insert(i);
                let (cur, cand) = (&words[*e].word.bbox, &w.word.bbox);
                if (right && cand.right() > cur.right()) || (!right && cand.x < cur.x) {
                    *e = i;
                }
            }
            best.into_values().collect::<Vec<_>>()
        };
        let lefts = edge(p, true);
        let rights = edge(p + 1, false);
        let mut taken = alloc::vec![false; rights.len()];
        for &l in &lefts {
            let ly = words[l].word.centroid().y;
            let h = words[l].word.bbox.height;
            let partner = rights
                .iter()
                .enumerate()
                .filter(|(k, _)| !taken[*k])
                .map(|(k, &r)| (k, r, (words[r].word.centroid().y - ly).abs()))
                .filter(|(_, _, dy)| *dy <= h)
                .min_by(|a, b| a.2.total_cmp(&b.2));
            let Some((k, r, _)) = partner else { continue };
            if absorbed[l] || absorbed[r] || rng.random::<f64>() >= rate {
                continue;
            }
            taken[k] = true;
            let left_text = words[l].text.trim_end_matches(|c: char| CORRUPTIBLE.contains(&c) || c == '.');
            words[l].text = alloc::format!("{left_text}{}", words[r].text);
            words[l].word.bbox = words[l].word.bbox.union(&words[r].word.bbox);
            absorbed[r] = true;
        }
    }
    let mut k = 0;
    words.retain(|_| {
        k += 1;
        !absorbed[k - 1]
    });
}

/// Applies the noise model to a label's ideal words. Passes run in order:
/// panel merges, word drops, character substitutions, delimiter corruption,
/// curvature. One Xoshiro256++ stream seeded with `cfg.seed` drives every draw.
pub fn corrupt_with(label: &SyntheticLabel, cfg: &NoiseConfig, table: &ConfusionTable) -> OcrDocument {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(cfg.seed);
    let mut words: Vec<Work> = label
        .ideal_words
        .words
        .iter()
        .zip(&label.roles)
        .map(|(w, r)| Work { text: w.text().into(), word: w.clone(), panel: r.panel, line: r.line })
        .collect();

    if label.family == Family::C && cfg.panel_merge_rate > 0.0 {
        merge_panels(&mut words, cfg.panel_merge_rate, &mut rng);
    }

    let page_w = label.ideal_words.image_size.map_or(1.0, |(w, _)| w);
    let mut out = Vec::with_capacity(words.len());
    for w in words {
        if rng.random::<f64>() < cfg.word_drop_rate {
            continue;
        }
        let text = table.substitute(&w.text, cfg.char_substitution_rate, &mut rng);
        let text = corrupt_delimiters(&text, cfg.delimiter_corruption_rate, &mut rng);
        let mut bbox = w.word.bbox;
        if cfg.curvature_amplitude > 0.0 {
            bbox.y += cfg.curvature_amplitude * libm::sin(PI * bbox.centroid().x / page_w);
        }
        if text == w.word.text() && bbox == w.word.bbox {
            out.push(w.word);
        } else if let Ok(nw) = WordBox::new(&text, bbox) {
            out.push(nw.with_line_id(w.word.line_id));
        }
    }
    // the curve only bends downward, so the frame grows by the amplitude
    let image_size = label.ideal_words.image_size.map(|(w, h)| (w, h + cfg.curvature_amplitude));
    OcrDocument { words: out, image_size, ..label.ideal_words.clone() }
}

/// [`corrupt_with`] using the bundled confusion table.
pub fn corrupt(label: &SyntheticLabel, cfg: &NoiseConfig) -> OcrDocument {
    corrupt_with(label, cfg, &crate::data::confusions())
}

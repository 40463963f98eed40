//! Synthetic ingredient labels at the word-box level, and an OCR noise model.
//!
//! A [`LayoutTemplate`] fixes a family and its geometry ranges; [`instantiate`]
//! samples ingredient names from a vocabulary and lays them out as ideal word
//! boxes with ground truth. [`corrupt`] degrades those boxes the way an OCR
//! engine does: substituted glyphs, dropped words, broken delimiters, merged
//! cross-column words and curved baselines.
//!
//! Character advance is 0.5 h for most scripts and 1.0 h for CJK, with
//! 0.3 h between words. A, B and C blocks are centered and re-wrapped until
//! their words form one DBSCAN cluster at the default settings; D blocks are
//! left-aligned and never repaired. Arabic is laid out left to right and
//! flagged `rtl`.

mod layout;
mod noise;
mod template;

pub use noise::{corrupt, corrupt_with, ConfusionTable, ErrorMode, NoiseConfig};
pub use template::{Family, LayoutTemplate, MAX_PANEL_OFFSET, MAX_ROW_GAP};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};
use serde::{Deserialize, Serialize};

use crate::clustering::{ClusterConfig, VocabularySet};
use crate::model::{GroundTruthLabel, LabelSource, OcrDocument, Rect, TruthIngredient, WordBox};
use layout::{bounds, break_long, connected_block, flow, place, translate, units, Placed, Unit};

/// Engine id carried by generated documents.
pub const SYNTHETIC_ENGINE: &str = "synthetic";

const BRANDS: [&str; 10] =
    ["Zyvora", "Krunchix", "Qwelto", "Brixxon", "Vantuk", "Olmetz", "Fjordik", "Mirvane", "Trescoa", "Palundo"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error("template {id}: {reason}")]
    InvalidTemplate { id: String, reason: &'static str },
    #[error("vocabulary {language} has {available} entries, template {template} needs {required}")]
    VocabularyTooSmall { language: String, template: String, required: usize, available: usize },
    #[error("noise {field} = {value} is out of range")]
    InvalidNoise { field: &'static str, value: f64 },
    #[error("corpus count must be at least 1")]
    EmptyCorpus,
    #[error("corpus needs at least one template and one vocabulary")]
    NothingToGenerate,
    #[error("unknown template id {0}")]
    UnknownTemplate(String),
    #[error("no vocabulary for language {0}")]
    UnknownLanguage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleKind {
    Header,
    Ingredient,
    Brand,
    Nutrition,
}

/// What an ideal word is and where it sits in the layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordRole {
    pub kind: RoleKind,
    /// Panel index for C-family blocks.
    pub panel: Option<u32>,
    /// Line index, unique across the page.
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticLabel {
    pub image_id: String,
    pub language: String,
    pub template_id: String,
    pub family: Family,
    pub seed: u64,
    /// Right-to-left script laid out left to right.
    pub rtl: bool,
    pub truth: GroundTruthLabel,
    pub ideal_words: OcrDocument,
    /// One entry per ideal word.
    pub roles: Vec<WordRole>,
}

impl SyntheticLabel {
    pub fn page_size(&self) -> (f64, f64) {
        self.ideal_words.image_size.unwrap_or((0.0, 0.0))
    }

    fn set_image_id(&mut self, id: String) {
        self.truth.image_id.clone_from(&id);
        self.ideal_words.image_id.clone_from(&id);
        self.image_id = id;
    }
}

fn delimiter(language: &str) -> char {
    match language {
        "ja" => '\u{3001}',
        "ar" => '\u{060C}',
        _ => ',',
    }
}

fn is_delimiter(c: char) -> bool {
    matches!(c, ',' | ';' | '\u{3001}' | '\u{060C}' | '\u{00B7}' | '.')
}

fn uniform(rng: &mut Xoshiro256PlusPlus, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..=hi)
    } else {
        lo
    }
}

fn count(rng: &mut Xoshiro256PlusPlus, (lo, hi): (usize, usize)) -> usize {
    rng.random_range(lo..=hi)
}

fn tagged(s: &str, tag: Option<usize>) -> Vec<(char, Option<usize>)> {
    s.chars().map(|c| (c, tag)).collect()
}

/// Ingredient stream for entries `range` of `names`: each name is followed by
/// the delimiter unless it is the last ingredient of the label.
fn entry_stream(
    names: &[String],
    range: core::ops::Range<usize>,
    delim: char,
    spaced: bool,
) -> Vec<(char, Option<usize>)> {
    let mut s = Vec::new();
    for i in range {
        s.extend(tagged(&names[i], Some(i)));
        if i + 1 < names.len() {
            s.push((delim, None));
        }
        if spaced {
            s.push((' ', None));
        }
    }
    s
}

struct Block {
    placed: Vec<Placed>,
    kind: RoleKind,
    panel: Option<u32>,
}

fn ingredient_block(placed: Vec<Placed>, panel: Option<u32>) -> Block {
    Block { placed, kind: RoleKind::Ingredient, panel }
}

fn nutrition_tokens(rng: &mut Xoshiro256PlusPlus, n: usize) -> Vec<String> {
    (0..n)
        .map(|_| match rng.random_range(0..5u8) {
            0 => format!("{}kJ", rng.random_range(200..2600u32)),
            1 => format!("{}kcal", rng.random_range(40..620u32)),
            2 => format!("{}.{}g", rng.random_range(0..60u32), rng.random_range(0..10u32)),
            3 => format!("{}%", rng.random_range(1..99u32)),
            _ => format!("<0.{}g", rng.random_range(1..10u32)),
        })
        .collect()
}

fn single_column(tokens: &[String], h: f64, pitch: f64) -> Vec<Placed> {
    let groups: Vec<Vec<Unit>> = tokens.iter().map(|t| alloc::vec![Unit { chars: tagged(t, None) }]).collect();
    place(&flow(&groups, 0.0, h), h, pitch, true)
}

fn block_right(placed: &[Placed]) -> f64 {
    bounds(placed.iter().map(|p| p.rect)).map_or(0.0, |b| b.right())
}

/// Lays out one label from `template`, drawing names from `vocab`.
/// Deterministic per (template, vocabulary, seed).
pub fn instantiate(template: &LayoutTemplate, vocab: &VocabularySet, seed: u64) -> Result<SyntheticLabel, SynthError> {
    template.validate()?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let n = count(&mut rng, template.ingredient_count_range);
    if vocab.len() < template.ingredient_count_range.1 {
        return Err(SynthError::VocabularyTooSmall {
            language: vocab.language.clone(),
            template: template.id.clone(),
            required: template.ingredient_count_range.1,
            available: vocab.len(),
        });
    }
    let pool: Vec<&str> = vocab.entries().iter().map(|e| e.as_str()).collect();
    let names: Vec<String> = sample(&mut rng, pool.len(), n).into_iter().map(|i| String::from(pool[i])).collect();

    let lang = vocab.language.as_str();
    let delim = delimiter(lang);
    let header = crate::data::header(lang).unwrap_or("Ingredients:");
    let eps_mult = ClusterConfig::default().eps_multiplier;
    let h = uniform(&mut rng, template.font_height_range);
    let pitch = h * (1.0 + template.row_gap);
    let width = template.block_width * h;

    let mut blocks: Vec<Block> = Vec::new();
    match template.family {
        Family::A => {
            let mut groups = alloc::vec![units(&tagged(header, None))];
            for i in 0..n {
                groups.push(units(&entry_stream(&names, i..i + 1, delim, true)));
            }
            blocks.push(ingredient_block(connected_block(&groups, width, h, pitch, eps_mult * h), None));
        }
        Family::B => {
            let mut stream = tagged(header, None);
            stream.push((' ', None));
            stream.extend(entry_stream(&names, 0..n, delim, true));
            let mut body = connected_block(&[units(&stream)], width, h, pitch, eps_mult * h);

            let brands = count(&mut rng, template.brand_words);
            if brands > 0 {
                let bh = 1.6 * h;
                let mut x = 0.0;
                let mut brand = Vec::new();
                for _ in 0..brands {
                    let t = BRANDS[rng.random_range(0..BRANDS.len())];
                    let u = Unit { chars: tagged(t, None) };
                    let w = u.width(bh);
                    brand.push(Placed { unit: u, rect: Rect { x, y: 0.0, width: w, height: bh }, line: 0 });
                    x += w + 4.0 * bh;
                }
                translate(&mut body, 0.0, bh + 4.0 * h);
                blocks.push(Block { placed: brand, kind: RoleKind::Brand, panel: None });
            }
            blocks.push(ingredient_block(body, None));
        }
        Family::C => {
            // panels share one font and pitch, so row i of every panel lands on one scan line
            let k = template.column_count;
            let mut x = 0.0;
            let mut start = 0;
            for p in 0..k {
                let size = n / k + usize::from(p < n % k);
                let mut stream = if p == 0 { tagged(header, None) } else { Vec::new() };
                if p == 0 {
                    stream.push((' ', None));
                }
                stream.extend(entry_stream(&names, start..start + size, delim, true));
                start += size;
                let mut panel = connected_block(&[units(&stream)], width, h, pitch, eps_mult * h);
                let dy = uniform(&mut rng, (0.0, template.panel_offset * h));
                translate(&mut panel, x, dy);
                x = block_right(&panel) + template.column_gap * h;
                blocks.push(ingredient_block(panel, Some(p as u32)));
            }
            let rows = count(&mut rng, template.nutrition_rows);
            if rows > 0 {
                let tokens = nutrition_tokens(&mut rng, rows);
                let mut col = single_column(&tokens, h, pitch);
                translate(&mut col, x, 0.0);
                blocks.push(Block { placed: col, kind: RoleKind::Nutrition, panel: None });
            }
        }
        Family::D => {
            let mut stream = tagged(header, None);
            stream.push((' ', None));
            stream.extend(entry_stream(&names, 0..n, delim, false));
            let pieces = break_long(units(&stream), width, h, is_delimiter);
            let body = place(&flow(&[pieces], width, h), h, pitch, false);
            let right = block_right(&body);
            blocks.push(ingredient_block(body, None));
            let rows = count(&mut rng, template.nutrition_rows);
            if rows > 0 {
                let tokens = nutrition_tokens(&mut rng, rows);
                let mut col = single_column(&tokens, h, pitch);
                translate(&mut col, right + template.column_gap * h, 0.0);
                blocks.push(Block { placed: col, kind: RoleKind::Nutrition, panel: None });
            }
        }
    }

    Ok(assemble(template, lang, seed, &names, header, blocks))
}

/// Scales the page content into the margins and builds words, roles and truth.
fn assemble(
    template: &LayoutTemplate,
    lang: &str,
    seed: u64,
    names: &[String],
    header: &str,
    mut blocks: Vec<Block>,
) -> SyntheticLabel {
    let (pw, ph) = template.page_size;
    let m = template.margin;
    let all = bounds(blocks.iter().flat_map(|b| b.placed.iter().map(|p| p.rect))).unwrap_or(Rect {
        x: 0.0,
        y: 0.0,
        width: 1.0,
        height: 1.0,
    });
    let s = ((pw - 2.0 * m) / all.width).min((ph - 2.0 * m) / all.height).min(1.0);

    let mut words = Vec::new();
    let mut roles = Vec::new();
    let mut line_base = 0u32;
    for b in &mut blocks {
        let mut lines = 0;
        for p in &mut b.placed {
            p.rect = p.rect.translated(-all.x, -all.y).scaled(s).translated(m, m);
            let kind = if b.kind == RoleKind::Ingredient && p.unit.entries().is_empty() && p.unit.text() == header {
                RoleKind::Header
            } else {
                b.kind
            };
            let line = line_base + p.line as u32;
            lines = lines.max(p.line as u32 + 1);
            let text = p.unit.text();
            if let Ok(w) = WordBox::new(&text, p.rect) {
                words.push((w.with_line_id(Some(line)), p.unit.entries()));
                roles.push(WordRole { kind, panel: b.panel, line });
            }
        }
        line_base += lines;
    }

    let ingredients = names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let bbox = bounds(words.iter().filter(|(_, e)| e.contains(&i)).map(|(w, _)| w.bbox)).unwrap_or(Rect {
                x: m,
                y: m,
                width: 1.0,
                height: 1.0,
            });
            TruthIngredient { name: name.clone(), bbox }
        })
        .collect();

    let image_id = format!("{}-{}-{seed:016x}", template.id, lang);
    let words: Vec<WordBox> = words.into_iter().map(|(w, _)| w).collect();
    SyntheticLabel {
        image_id: image_id.clone(),
        language: lang.into(),
        template_id: template.id.clone(),
        family: template.family,
        seed,
        rtl: lang == "ar",
        truth: GroundTruthLabel {
            image_id: image_id.clone(),
            language: lang.into(),
            ingredients,
            source: LabelSource::Synthetic,
        },
        ideal_words: OcrDocument::new(image_id, SYNTHETIC_ENGINE, words).with_image_size(pw, ph),
        roles,
    }
}

/// One generated label and its noisy OCR document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusItem {
    pub label: SyntheticLabel,
    pub ocr: OcrDocument,
}

/// `count` labels, cycling through every (template, vocabulary) pair.
///
/// Item `i` uses pair `i mod pairs`, templates outermost. Layout seeds come
/// from a SplitMix64 stream seeded with `seed`, noise seeds from a second
/// stream seeded with `noise.seed`. Image ids are `syn-00000`, `syn-00001`, ...
pub fn generate_corpus(
    templates: &[LayoutTemplate],
    vocabs: &[VocabularySet],
    count: usize,
    noise: &NoiseConfig,
    seed: u64,
) -> Result<Vec<CorpusItem>, SynthError> {
    if count == 0 {
        return Err(SynthError::EmptyCorpus);
    }
    if templates.is_empty() || vocabs.is_empty() {
        return Err(SynthError::NothingToGenerate);
    }
    noise.validate()?;
    let table = crate::data::confusions();
    let mut layout_seeds = SplitMix64::seed_from_u64(seed);
    let mut noise_seeds = SplitMix64::seed_from_u64(noise.seed);
    let pairs = templates.len() * vocabs.len();
    (0..count)
        .map(|i| {
            let k = i % pairs;
            let (t, v) = (&templates[k / vocabs.len()], &vocabs[k % vocabs.len()]);
            let mut label = instantiate(t, v, layout_seeds.next_u64())?;
            label.set_image_id(format!("syn-{i:05}"));
            let cfg = NoiseConfig { seed: noise_seeds.next_u64(), ..*noise };
            let ocr = corrupt_with(&label, &cfg, &table);
            Ok(CorpusItem { label, ocr })
        })
        .collect()
}

/// Declarative description of a corpus over the bundled templates and
/// vocabularies. Empty lists mean "all".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    #[serde(default)]
    pub templates: Vec<String>,
    /// Keeps only templates of these families.
    #[serde(default)]
    pub families: Vec<Family>,
    #[serde(default)]
    pub languages: Vec<String>,
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub noise: NoiseConfig,
}

impl CorpusSpec {
    /// Bundled templates and vocabularies selected by this spec, in bundle order.
    pub fn resolve(&self) -> Result<(Vec<LayoutTemplate>, Vec<VocabularySet>), SynthError> {
        let all = crate::data::templates();
        if let Some(id) = self.templates.iter().find(|id| !all.iter().any(|t| &t.id == *id)) {
            return Err(SynthError::UnknownTemplate(id.clone()));
        }
        let templates = all
            .into_iter()
            .filter(|t| self.templates.is_empty() || self.templates.contains(&t.id))
            .filter(|t| self.families.is_empty() || self.families.contains(&t.family))
            .collect();
        let vocabs = if self.languages.is_empty() {
            crate::data::vocabularies()
        } else {
            self.languages
                .iter()
                .map(|l| crate::data::vocabulary(l).ok_or_else(|| SynthError::UnknownLanguage(l.clone())))
                .collect::<Result<_, _>>()?
        };
        Ok((templates, vocabs))
    }

    pub fn generate(&self) -> Result<Vec<CorpusItem>, SynthError> {
        let (templates, vocabs) = self.resolve()?;
        generate_corpus(&templates, &vocabs, self.count, &self.noise, self.seed)
    }
}

#[cfg(test)]
mod tests;

use super::*;
use crate::data;
use crate::pipeline::{Pipeline, Strategy};
use alloc::vec;

fn template(family: Family) -> LayoutTemplate {
    data::templates().into_iter().find(|t| t.family == family).unwrap()
}

fn en() -> VocabularySet {
    data::vocabulary("en").unwrap()
}

#[test]
fn a_family_rows_are_disjoint() {
    let t = LayoutTemplate {
        ingredient_count_range: (5, 5),
        page_size: (400.0, 600.0),
        margin: 20.0,
        ..template(Family::A)
    };
    let label = instantiate(&t, &en(), 7).unwrap();
    let ing = &label.truth.ingredients;
    assert_eq!(ing.len(), 5);
    for pair in ing.windows(2) {
        assert!(pair[0].bbox.bottom() <= pair[1].bbox.y, "{:?}", pair);
    }
    label.ideal_words.validate().unwrap();
}

#[test]
fn b_family_round_trips_through_extraction() {
    let t = LayoutTemplate { ingredient_count_range: (6, 6), brand_words: (0, 0), ..template(Family::B) };
    let label = instantiate(&t, &en(), 11).unwrap();
    let ex = crate::extraction::Extractor::default();
    let got = crate::extraction::names(&ex.extract(&label.ideal_words.words));
    assert_eq!(got, label.truth.canonical_names());
}

#[test]
fn c_family_columns_are_disjoint() {
    let t = LayoutTemplate {
        ingredient_count_range: (8, 8),
        column_count: 2,
        nutrition_rows: (0, 0),
        ..template(Family::C)
    };
    let label = instantiate(&t, &en(), 5).unwrap();
    assert_eq!(label.truth.ingredients.len(), 8);
    let extent = |p: u32| {
        bounds(
            label.ideal_words.words.iter().zip(&label.roles).filter(|(_, r)| r.panel == Some(p)).map(|(w, _)| w.bbox),
        )
        .unwrap()
    };
    let (a, b) = (extent(0), extent(1));
    let h_min = label.ideal_words.words.iter().map(|w| w.bbox.height).fold(f64::INFINITY, f64::min);
    assert!(b.x - a.right() >= t.column_gap * h_min - 1e-9);
}

#[test]
fn small_vocabulary_is_rejected() {
    let v = VocabularySet::new("en", ["water", "salt"]);
    let err = instantiate(&template(Family::A), &v, 1).unwrap_err();
    assert!(matches!(err, SynthError::VocabularyTooSmall { required: 40, available: 2, .. }));
}

#[test]
fn zero_noise_is_identity() {
    for family in [Family::A, Family::B, Family::C, Family::D] {
        let label = instantiate(&template(family), &en(), 3).unwrap();
        assert_eq!(corrupt(&label, &NoiseConfig::zero(9)), label.ideal_words);
    }
}

#[test]
fn full_drop_empties_the_document() {
    let label = instantiate(&template(Family::B), &en(), 3).unwrap();
    let doc = corrupt(&label, &NoiseConfig { word_drop_rate: 1.0, ..Default::default() });
    assert!(doc.words.is_empty());
}

#[test]
fn delimiter_corruption_hurts_without_full_stop() {
    let t = LayoutTemplate { brand_words: (0, 0), ..template(Family::B) };
    let label = instantiate(&t, &en(), 21).unwrap();
    let doc = corrupt(&label, &NoiseConfig { delimiter_corruption_rate: 1.0, seed: 4, ..Default::default() });
    let mut pipeline = Pipeline::default();
    pipeline.extractor.delimiters = crate::extraction::DelimiterSet::standard(false);
    let m = pipeline.evaluate(&doc, &label.truth, Strategy::DbscanVote).unwrap();
    assert!(m.f1 < 1.0);
}

#[test]
fn same_seed_same_label() {
    let t = template(Family::C);
    assert_eq!(instantiate(&t, &en(), 99).unwrap(), instantiate(&t, &en(), 99).unwrap());
    assert_ne!(instantiate(&t, &en(), 99).unwrap(), instantiate(&t, &en(), 100).unwrap());
}

#[test]
fn every_template_and_language_fits_the_page() {
    let vocabs = data::vocabularies();
    for t in data::templates() {
        for v in &vocabs {
            for seed in 0..2 {
                let label = instantiate(&t, v, seed).unwrap();
                label.ideal_words.validate().unwrap();
                assert_eq!(label.roles.len(), label.ideal_words.words.len());
                for (ing, name) in label.truth.ingredients.iter().zip(label.truth.canonical_names()) {
                    let words: Vec<_> =
                        label.ideal_words.words.iter().filter(|w| ing.bbox.contains_rect(&w.bbox, 0.0)).collect();
                    assert!(!words.is_empty(), "{} {} {name}", t.id, v.language);
                }
            }
        }
    }
}

#[test]
fn a_and_b_ideal_words_score_perfectly() {
    let pipeline = Pipeline::default();
    let vocabs = data::vocabularies();
    for t in data::templates().iter().filter(|t| matches!(t.family, Family::A | Family::B)) {
        for v in &vocabs {
            let label = instantiate(t, v, 17).unwrap();
            for s in [Strategy::DbscanFlat, Strategy::DbscanVote] {
                let m = pipeline.evaluate(&label.ideal_words, &label.truth, s).unwrap();
                assert_eq!(m.f1, 1.0, "{} {} {s}", t.id, v.language);
            }
        }
    }
}

#[test]
fn curvature_stays_within_amplitude() {
    let label = instantiate(&template(Family::C), &en(), 8).unwrap();
    let amp = 25.0;
    let doc = corrupt(&label, &NoiseConfig { curvature_amplitude: amp, ..Default::default() });
    let (w, h) = label.page_size();
    let page = Rect { x: 0.0, y: 0.0, width: w, height: h + amp };
    assert!(doc.words.iter().all(|wb| page.contains_rect(&wb.bbox, 1e-9)));
}

#[test]
fn panel_merges_create_chimeras() {
    let t = template(Family::C);
    let label = instantiate(&t, &en(), 8).unwrap();
    let doc = corrupt(&label, &NoiseConfig { panel_merge_rate: 1.0, ..Default::default() });
    assert!(doc.words.len() < label.ideal_words.words.len());
}

#[test]
fn corpus_basics() {
    let templates = data::templates();
    let vocabs = vec![en()];
    let one = generate_corpus(&templates, &vocabs, 1, &NoiseConfig::default(), 42).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].label.image_id, "syn-00000");
    assert_eq!(generate_corpus(&templates, &vocabs, 0, &NoiseConfig::default(), 42), Err(SynthError::EmptyCorpus));
    let a = generate_corpus(&templates, &vocabs, 30, &NoiseConfig::preset(ErrorMode::SmallFont, 3), 42).unwrap();
    let b = generate_corpus(&templates, &vocabs, 30, &NoiseConfig::preset(ErrorMode::SmallFont, 3), 42).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

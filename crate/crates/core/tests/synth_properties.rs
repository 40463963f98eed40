mod common;

use labeleval_core::pipeline::{Pipeline, Strategy};
use labeleval_core::synthgen::{CorpusSpec, Family, NoiseConfig};

use common::mean;

fn spec(families: &[Family], count: usize, noise: NoiseConfig) -> CorpusSpec {
    CorpusSpec { templates: vec![], families: families.to_vec(), languages: vec![], count, seed: 42, noise }
}

fn scores(spec: &CorpusSpec, strategy: Strategy) -> (f64, f64) {
    let pipeline = Pipeline::default();
    let samples: Vec<_> =
        spec.generate().unwrap().iter().map(|c| pipeline.evaluate(&c.ocr, &c.label.truth, strategy).unwrap()).collect();
    (mean(samples.iter().map(|s| s.f1)), mean(samples.iter().map(|s| s.fuzzy_f1)))
}

fn substitution(rate: f64) -> NoiseConfig {
    NoiseConfig { char_substitution_rate: rate, ..NoiseConfig::zero(5) }
}

#[test]
fn f1_degrades_with_substitution() {
    let f1: Vec<f64> = [0.0, 0.05, 0.15, 0.3]
        .iter()
        .map(|&r| scores(&spec(&[], 50, substitution(r)), Strategy::DbscanVote).0)
        .collect();
    let inversions = f1.windows(2).filter(|w| w[1] > w[0]).count();
    assert!(inversions <= 1, "{f1:?}");
    assert!(f1[3] < f1[0], "{f1:?}");
}

#[test]
fn fuzzy_cushion_on_b_family() {
    let (exact, fuzzy) = scores(&spec(&[Family::B], 60, substitution(0.05)), Strategy::DbscanVote);
    assert!(fuzzy >= exact + 0.05, "exact {exact:.3} fuzzy {fuzzy:.3}");
}

#[test]
fn clean_a_and_b_are_perfect_under_both_dbscan_strategies() {
    for s in [Strategy::DbscanFlat, Strategy::DbscanVote] {
        let (exact, fuzzy) = scores(&spec(&[Family::A, Family::B], 56, NoiseConfig::zero(0)), s);
        assert_eq!((exact, fuzzy), (1.0, 1.0), "{s}");
    }
}

#[test]
fn corpus_is_reproducible() {
    let s = spec(&[], 30, NoiseConfig { word_drop_rate: 0.1, panel_merge_rate: 0.2, ..substitution(0.1) });
    let a = serde_json::to_string(&s.generate().unwrap()).unwrap();
    assert_eq!(a, serde_json::to_string(&s.generate().unwrap()).unwrap());
}

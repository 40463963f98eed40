use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{MetricsError, SampleMetrics};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageAggregate {
    pub n: usize,
    pub f1: f64,
}

/// Macro-averaged scores over a set of samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub n: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub fuzzy_f1: f64,
    /// Percentage of catastrophic samples, 0 to 100.
    pub catastrophic_pct: f64,
    pub per_language: BTreeMap<String, LanguageAggregate>,
}

// Summing sorted values makes the mean independent of sample order.
fn mean(mut values: Vec<f64>) -> f64 {
    let n = values.len() as f64;
    values.sort_by(f64::total_cmp);
    values.iter().sum::<f64>() / n
}

pub fn aggregate(samples: &[SampleMetrics]) -> Result<Aggregate, MetricsError> {
    if samples.is_empty() {
        return Err(MetricsError::NoSamples);
    }
    let field = |f: fn(&SampleMetrics) -> f64| mean(samples.iter().map(f).collect());

    let mut by_lang: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for s in samples {
        by_lang.entry(s.language.clone()).or_default().push(s.f1);
    }
    let per_language =
        by_lang.into_iter().map(|(lang, f1s)| (lang, LanguageAggregate { n: f1s.len(), f1: mean(f1s) })).collect();

    let catastrophic = samples.iter().filter(|s| s.is_catastrophic).count();
    Ok(Aggregate {
        n: samples.len(),
        precision: field(|s| s.precision),
        recall: field(|s| s.recall),
        f1: field(|s| s.f1),
        fuzzy_f1: field(|s| s.fuzzy_f1),
        catastrophic_pct: 100.0 * catastrophic as f64 / samples.len() as f64,
        per_language,
    })
}

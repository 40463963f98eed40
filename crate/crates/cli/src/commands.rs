use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use labeleval_core::ingest::{stratified_split, CocoDataset, EngineOutput};
use labeleval_core::metrics::{aggregate, paired_bootstrap, SampleMetrics};
use labeleval_core::model::GroundTruthLabel;
use labeleval_core::pipeline::Strategy;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, Source};
use crate::error::{CliError, Result};
use crate::io::{self, EngineDocuments, InputHash};
use crate::report::{self, Coverage, PairwiseTest, Report, ResultRow, Run};

/// Labels and documents ready for scoring.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub labels: BTreeMap<String, GroundTruthLabel>,
    pub engines: EngineDocuments,
    pub inputs: Vec<InputHash>,
    pub warnings: Vec<String>,
}

pub fn load(cfg: &RunConfig) -> Result<Loaded> {
    match cfg.validate()? {
        Source::Files { truth, ocr_dir } => {
            let (ds, hash) = io::load_coco(truth)?;
            let build = ds.to_labels().map_err(|e| CliError::InvalidFiles(vec![(truth.into(), e.to_string())]))?;
            let mut labels = BTreeMap::new();
            for label in build.labels {
                if let Some(prev) = labels.insert(label.image_id.clone(), label) {
                    return Err(CliError::invalid(format!("two images share the file stem {:?}", prev.image_id)));
                }
            }
            let (engines, mut inputs) = io::load_ocr_dir(ocr_dir)?;
            inputs.insert(0, hash);
            Ok(Loaded { labels, engines, inputs, warnings: build.warnings })
        }
        Source::Corpus(path) => {
            let (spec, hash) = io::load_corpus_spec(path)?;
            let items = spec.generate().map_err(CliError::invalid)?;
            let mut engines = EngineDocuments::new();
            let mut labels = BTreeMap::new();
            for item in items {
                engines.entry(item.ocr.engine_id.clone()).or_default().push(item.ocr);
                labels.insert(item.label.image_id, item.label.truth);
            }
            for docs in engines.values_mut() {
                docs.sort_by(|a, b| a.image_id.cmp(&b.image_id));
            }
            Ok(Loaded { labels, engines, inputs: vec![hash], warnings: vec![] })
        }
    }
}

/// Scores every labeled document under each strategy, in parallel per document.
pub fn score(cfg: &RunConfig, loaded: &Loaded, strategies: &[Strategy]) -> Result<(Vec<Run>, Vec<Coverage>)> {
    let pipeline = cfg.pipeline();
    let mut runs = Vec::new();
    let mut coverage = Vec::new();
    for (engine, docs) in &loaded.engines {
        let (matched, unlabeled): (Vec<_>, Vec<_>) = docs.iter().partition(|d| loaded.labels.contains_key(&d.image_id));
        let present: BTreeSet<&str> = docs.iter().map(|d| d.image_id.as_str()).collect();
        let per_doc: Vec<Vec<SampleMetrics>> = matched
            .par_iter()
            .map(|doc| {
                let label = &loaded.labels[&doc.image_id];
                strategies.iter().map(|&s| pipeline.evaluate(doc, label, s)).collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<_, _>>()
            .map_err(CliError::invalid)?;
        for (i, &strategy) in strategies.iter().enumerate() {
            let samples = per_doc.iter().map(|row| row[i].clone()).collect();
            runs.push(Run { engine: engine.clone(), strategy, samples });
        }
        coverage.push(Coverage {
            engine: engine.clone(),
            documents: docs.len(),
            evaluated: matched.len(),
            skipped_unlabeled: unlabeled.iter().map(|d| d.image_id.clone()).collect(),
            missing_documents: loaded.labels.keys().filter(|k| !present.contains(k.as_str())).cloned().collect(),
        });
    }
    if coverage.iter().all(|c| c.evaluated == 0) {
        return Err(CliError::invalid("no OCR document has an image_id with a ground-truth label"));
    }
    runs.retain(|r| !r.samples.is_empty());
    Ok((runs, coverage))
}

fn rows(runs: &[Run]) -> Result<Vec<ResultRow>> {
    runs.iter()
        .map(|r| {
            let aggregate = aggregate(&r.samples).map_err(CliError::invalid)?;
            Ok(ResultRow { engine: r.engine.clone(), strategy: r.strategy, aggregate })
        })
        .collect()
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn report(
    command: &'static str,
    cfg: &RunConfig,
    loaded: Loaded,
    coverage: Vec<Coverage>,
    results: Vec<ResultRow>,
) -> Report {
    Report {
        generated_at: now(),
        command,
        version: report::VERSION,
        inputs: loaded.inputs,
        config: cfg.clone(),
        coverage,
        warnings: loaded.warnings,
        results,
        pairwise: vec![],
    }
}

/// Files written by `evaluate` and `ablation`.
#[derive(Debug, Clone)]
pub struct Written {
    pub report: Report,
    pub files: Vec<PathBuf>,
}

fn write_all(out: &Path, files: &[(&str, Vec<u8>)]) -> Result<Vec<PathBuf>> {
    files
        .iter()
        .map(|(name, bytes)| {
            let p = out.join(name);
            io::write(&p, bytes)?;
            Ok(p)
        })
        .collect()
}

pub fn evaluate(cfg: &RunConfig) -> Result<Written> {
    let loaded = load(cfg)?;
    let (runs, coverage) = score(cfg, &loaded, &cfg.strategies)?;
    let results = rows(&runs)?;
    let report = report("evaluate", cfg, loaded, coverage, results);
    let files = write_all(
        &cfg.output,
        &[
            ("effective_config.toml", cfg.to_toml().into_bytes()),
            ("samples.csv", report::samples_csv(&runs)),
            ("report.json", report::to_json(&report).into_bytes()),
            ("report.md", report::evaluation_markdown(&report).into_bytes()),
        ],
    )?;
    Ok(Written { report, files })
}

pub fn ablation(cfg: &RunConfig) -> Result<Written> {
    let chosen: BTreeSet<Strategy> = cfg.strategies.iter().copied().collect();
    if chosen.len() != Strategy::ALL.len() {
        return Err(CliError::invalid("the ablation needs all four strategies enabled"));
    }
    let loaded = load(cfg)?;
    let (runs, coverage) = score(cfg, &loaded, &Strategy::ALL)?;
    let results = rows(&runs)?;
    let mut pairwise = Vec::new();
    let by_engine: BTreeSet<&str> = runs.iter().map(|r| r.engine.as_str()).collect();
    for engine in by_engine {
        let engine_runs: Vec<&Run> = runs.iter().filter(|r| r.engine == engine).collect();
        for (i, a) in engine_runs.iter().enumerate() {
            for b in &engine_runs[i + 1..] {
                let p_value = paired_bootstrap(&a.samples, &b.samples, cfg.bootstrap()).map_err(CliError::invalid)?;
                let mean = |r: &Run| r.samples.iter().map(|s| s.f1).sum::<f64>() / r.samples.len() as f64;
                pairwise.push(PairwiseTest {
                    engine: engine.to_string(),
                    a: a.strategy,
                    b: b.strategy,
                    delta_f1: mean(a) - mean(b),
                    p_value,
                });
            }
        }
    }
    let mut report = report("ablation", cfg, loaded, coverage, results);
    report.pairwise = pairwise;
    let files = write_all(
        &cfg.output,
        &[
            ("effective_config.toml", cfg.to_toml().into_bytes()),
            ("ablation_samples.csv", report::samples_csv(&runs)),
            ("ablation.json", report::to_json(&report).into_bytes()),
            ("ablation.md", report::ablation_markdown(&report).into_bytes()),
        ],
    )?;
    Ok(Written { report, files })
}

#[derive(Serialize)]
struct ManifestRow<'a> {
    image_id: &'a str,
    template_id: &'a str,
    family: String,
    language: &'a str,
    seed: u64,
    rtl: bool,
}

/// Writes `truth.json` (COCO), `ocr/<image_id>.json`, `manifest.csv` and the
/// effective `corpus.json`. Returns the number of items.
pub fn generate(spec_path: &Path, out: &Path, count: Option<usize>, seed: Option<u64>) -> Result<usize> {
    let (mut spec, _) = io::load_corpus_spec(spec_path)?;
    spec.count = count.unwrap_or(spec.count);
    spec.seed = seed.unwrap_or(spec.seed);
    let items = spec.generate().map_err(CliError::invalid)?;

    let ocr_dir = out.join("ocr");
    if ocr_dir.read_dir().is_ok_and(|mut d| d.next().is_some()) {
        return Err(CliError::invalid(format!(
            "{} already holds documents; choose an empty output",
            ocr_dir.display()
        )));
    }
    let sizes = items.iter().map(|c| {
        let (w, h) = c.ocr.image_size.unwrap_or_else(|| c.label.page_size());
        (&c.label.truth, (w.ceil() as u32, h.ceil() as u32))
    });
    let coco = CocoDataset::from_labels(sizes);
    io::write(&out.join("truth.json"), pretty(&coco))?;
    io::write(&out.join("corpus.json"), pretty(&spec))?;

    let mut manifest = csv::Writer::from_writer(Vec::new());
    for item in &items {
        let doc = EngineOutput::from_document(&item.ocr);
        io::write(&ocr_dir.join(format!("{}.json", item.label.image_id)), pretty(&doc))?;
        let l = &item.label;
        manifest
            .serialize(ManifestRow {
                image_id: &l.image_id,
                template_id: &l.template_id,
                family: format!("{:?}", l.family),
                language: &l.language,
                seed: l.seed,
                rtl: l.rtl,
            })
            .expect("in-memory csv write");
    }
    io::write(&out.join("manifest.csv"), manifest.into_inner().expect("in-memory csv flush"))?;
    Ok(items.len())
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SplitRow<'a> {
    image_id: u64,
    file_name: &'a str,
    language: &'a str,
    split: &'a str,
}

/// Per-language (train, test) counts.
pub type SplitCounts = BTreeMap<String, (usize, usize)>;

/// Writes the image_id to split CSV; returns per-language counts and warnings.
pub fn split(coco: &Path, seed: u64, fraction: f64, out: &Path) -> Result<(SplitCounts, Vec<String>)> {
    let (ds, _) = io::load_coco(coco)?;
    let assignment = stratified_split(&ds, seed, fraction).map_err(CliError::invalid)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for e in &assignment.entries {
        w.serialize(SplitRow {
            image_id: e.image_id,
            file_name: &e.file_name,
            language: &e.language,
            split: e.split.as_str(),
        })
        .expect("in-memory csv write");
    }
    io::write(out, w.into_inner().expect("in-memory csv flush"))?;
    let counts = assignment.counts_by_language().into_iter().map(|(l, c)| (l.to_string(), c)).collect();
    let warnings =
        assignment.warnings.iter().map(|w| format!("{} image {}: {}", w.language, w.image_id, w.message)).collect();
    Ok((counts, warnings))
}

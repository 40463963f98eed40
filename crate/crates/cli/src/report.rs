//! Report types and their CSV, JSON and markdown renderings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use labeleval_core::metrics::{Aggregate, SampleMetrics};
use labeleval_core::pipeline::Strategy;
use serde::Serialize;

use crate::config::RunConfig;
use crate::io::InputHash;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How many documents and labels took part, and which were left out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coverage {
    pub engine: String,
    pub documents: usize,
    pub evaluated: usize,
    /// Documents whose image_id has no label.
    pub skipped_unlabeled: Vec<String>,
    /// Labels with no document from this engine.
    pub missing_documents: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub engine: String,
    pub strategy: Strategy,
    #[serde(flatten)]
    pub aggregate: Aggregate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseTest {
    pub engine: String,
    pub a: Strategy,
    pub b: Strategy,
    /// Mean exact F1 of `a` minus that of `b`.
    pub delta_f1: f64,
    pub p_value: f64,
}

/// Samples of one engine under one strategy, in image_id order.
#[derive(Debug, Clone)]
pub struct Run {
    pub engine: String,
    pub strategy: Strategy,
    pub samples: Vec<SampleMetrics>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// Kept first so the timestamp sits alone on one line.
    pub generated_at: String,
    pub command: &'static str,
    pub version: &'static str,
    pub inputs: Vec<InputHash>,
    pub config: RunConfig,
    pub coverage: Vec<Coverage>,
    pub warnings: Vec<String>,
    pub results: Vec<ResultRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairwise: Vec<PairwiseTest>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    engine: &'a str,
    strategy: &'a str,
    image_id: &'a str,
    language: &'a str,
    precision: f64,
    recall: f64,
    f1: f64,
    fuzzy_f1: f64,
    catastrophic: bool,
    n_detected: usize,
    n_truth: usize,
}

pub fn samples_csv(runs: &[Run]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for run in runs {
        for s in &run.samples {
            w.serialize(CsvRow {
                engine: &run.engine,
                strategy: run.strategy.as_str(),
                image_id: &s.image_id,
                language: &s.language,
                precision: s.precision,
                recall: s.recall,
                f1: s.f1,
                fuzzy_f1: s.fuzzy_f1,
                catastrophic: s.is_catastrophic,
                n_detected: s.n_detected,
                n_truth: s.n_truth,
            })
            .expect("in-memory csv write");
        }
    }
    w.into_inner().expect("in-memory csv flush")
}

pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn header(out: &mut String, report: &Report, title: &str) {
    let _ = writeln!(out, "<!-- generated_at: {} -->", report.generated_at);
    let _ = writeln!(out, "# {title}\n");
    let _ = writeln!(out, "labeleval {}\n", report.version);
    let _ = writeln!(out, "| Input | SHA-256 |\n|---|---|");
    for i in &report.inputs {
        let _ = writeln!(out, "| `{}` | `{}` |", i.path, i.sha256);
    }
    out.push('\n');
    for c in &report.coverage {
        let _ = writeln!(
            out,
            "- {}: {} documents, {} evaluated, {} skipped without a label, {} labels without a document",
            c.engine,
            c.documents,
            c.evaluated,
            c.skipped_unlabeled.len(),
            c.missing_documents.len()
        );
    }
    for w in &report.warnings {
        let _ = writeln!(out, "- warning: {w}");
    }
    out.push('\n');
}

/// Engine comparison (one row per engine and strategy) and per-language F1 tables.
pub fn evaluation_markdown(report: &Report) -> String {
    let mut out = String::new();
    header(&mut out, report, "Evaluation");
    out.push_str("## Engine comparison\n\n");
    out.push_str("| Engine | Strategy | F1 | Fuz. | P | R | Cat.% | n |\n|---|---|---:|---:|---:|---:|---:|---:|\n");
    for r in &report.results {
        let a = &r.aggregate;
        let _ = writeln!(
            out,
            "| {} | {} | {:.3} | {:.3} | {:.3} | {:.3} | {:.1} | {} |",
            r.engine, r.strategy, a.f1, a.fuzzy_f1, a.precision, a.recall, a.catastrophic_pct, a.n
        );
    }
    let strategies: BTreeSet<Strategy> = report.results.iter().map(|r| r.strategy).collect();
    for s in strategies {
        let rows: Vec<&ResultRow> = report.results.iter().filter(|r| r.strategy == s).collect();
        let _ = writeln!(out, "\n## Per-language F1 ({s})\n");
        per_language_table(&mut out, &rows);
    }
    out
}

fn per_language_table(out: &mut String, rows: &[&ResultRow]) {
    let mut n: BTreeMap<&str, usize> = BTreeMap::new();
    for r in rows {
        for (lang, l) in &r.aggregate.per_language {
            let e = n.entry(lang).or_default();
            *e = (*e).max(l.n);
        }
    }
    let mut langs: Vec<(&str, usize)> = n.into_iter().collect();
    langs.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    out.push_str("| Lang | n |");
    for r in rows {
        let _ = write!(out, " {} |", r.engine);
    }
    out.push_str("\n|---|---:|");
    out.push_str(&"---:|".repeat(rows.len()));
    out.push('\n');
    for (lang, count) in langs {
        let _ = write!(out, "| {lang} | {count} |");
        for r in rows {
            match r.aggregate.per_language.get(lang) {
                Some(l) => {
                    let _ = write!(out, " {:.3} |", l.f1);
                }
                None => out.push_str(" - |"),
            }
        }
        out.push('\n');
    }
}

/// Strategy ablation per engine, followed by the pairwise bootstrap tests.
pub fn ablation_markdown(report: &Report) -> String {
    let mut out = String::new();
    header(&mut out, report, "Clustering ablation");
    let engines: BTreeSet<&str> = report.results.iter().map(|r| r.engine.as_str()).collect();
    for engine in engines {
        let rows: Vec<&ResultRow> = report.results.iter().filter(|r| r.engine == engine).collect();
        let n = rows.first().map_or(0, |r| r.aggregate.n);
        let _ = writeln!(out, "## {engine} ({n} samples)\n");
        out.push_str("| | Strategy | F1 | P | R |\n|---|---|---:|---:|---:|\n");
        for r in &rows {
            let (tag, name) = r.strategy.title().split_once(' ').unwrap_or(("", r.strategy.title()));
            let a = &r.aggregate;
            let _ = writeln!(out, "| {tag} | {name} | {:.3} | {:.3} | {:.3} |", a.f1, a.precision, a.recall);
        }
        out.push_str("\nPaired bootstrap on per-image exact F1:\n\n| A | B | ΔF1 | p |\n|---|---|---:|---:|\n");
        for t in report.pairwise.iter().filter(|t| t.engine == engine) {
            let _ = writeln!(out, "| {} | {} | {:+.3} | {:.4} |", t.a, t.b, t.delta_f1, t.p_value);
        }
        out.push('\n');
    }
    out
}

//! Run configuration: one TOML file plus command-line overrides.

use std::path::{Path, PathBuf};

use labeleval_core::clustering::ClusterConfig;
use labeleval_core::extraction::{DelimiterSet, Extractor};
use labeleval_core::metrics::{BootstrapConfig, DEFAULT_FUZZY_MAX_DIST};
use labeleval_core::pipeline::{Pipeline, Strategy};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io;

/// Where the labels and OCR documents come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source<'a> {
    /// COCO truth file plus a directory of interchange documents.
    Files { truth: &'a Path, ocr_dir: &'a Path },
    /// A synthetic corpus spec, generated in memory.
    Corpus(&'a Path),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractionConfig {
    /// Explicit delimiter characters; when set, `full_stop` is ignored.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delimiters: Option<DelimiterSet>,
    pub full_stop: bool,
    pub row_tolerance_multiplier: f64,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig { delimiters: None, full_stop: true, row_tolerance_multiplier: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BootstrapSettings {
    pub resamples: usize,
}

impl Default for BootstrapSettings {
    fn default() -> Self {
        BootstrapSettings { resamples: BootstrapConfig::default().resamples }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ocr_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<PathBuf>,
    pub strategies: Vec<Strategy>,
    pub output: PathBuf,
    /// Bootstrap seed.
    pub seed: u64,
    pub fuzzy_max_dist: usize,
    pub cluster: ClusterConfig,
    pub extraction: ExtractionConfig,
    pub bootstrap: BootstrapSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            truth: None,
            ocr_dir: None,
            corpus: None,
            strategies: Strategy::ALL.to_vec(),
            output: PathBuf::from("reports"),
            seed: 42,
            fuzzy_max_dist: DEFAULT_FUZZY_MAX_DIST,
            cluster: ClusterConfig::default(),
            extraction: ExtractionConfig::default(),
            bootstrap: BootstrapSettings::default(),
        }
    }
}

/// Command-line values that replace config-file values when present.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// COCO ground-truth file
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Directory of OCR interchange JSON documents
    #[arg(long)]
    pub ocr_dir: Option<PathBuf>,
    /// Synthetic corpus spec (JSON or TOML), used instead of truth + OCR files
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Comma-separated strategies: raw, line, dbscan_flat, dbscan_vote
    #[arg(long, value_delimiter = ',')]
    pub strategies: Option<Vec<Strategy>>,
    /// Output directory
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub fuzzy_max_dist: Option<usize>,
    #[arg(long)]
    pub eps_multiplier: Option<f64>,
    #[arg(long)]
    pub min_samples: Option<usize>,
    /// Do not treat the full stop as a delimiter
    #[arg(long)]
    pub no_full_stop: bool,
    #[arg(long)]
    pub resamples: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let bytes = io::read(path)?;
        io::parse_toml(&bytes).map_err(|e| CliError::InvalidFiles(vec![(path.into(), e)]))
    }

    /// Config file (if any) with flags applied on top.
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Self> {
        let mut cfg = match file {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        cfg.apply(flags);
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.corpus.is_some() {
            // a corpus flag replaces file-based inputs from the config, and vice versa
            (self.truth, self.ocr_dir) = (None, None);
        }
        if o.truth.is_some() || o.ocr_dir.is_some() {
            self.corpus = None;
        }
        set(&mut self.truth, o.truth.clone());
        set(&mut self.ocr_dir, o.ocr_dir.clone());
        set(&mut self.corpus, o.corpus.clone());
        if let Some(s) = &o.strategies {
            self.strategies = s.clone();
        }
        if let Some(p) = &o.output {
            self.output = p.clone();
        }
        self.seed = o.seed.unwrap_or(self.seed);
        self.fuzzy_max_dist = o.fuzzy_max_dist.unwrap_or(self.fuzzy_max_dist);
        self.cluster.eps_multiplier = o.eps_multiplier.unwrap_or(self.cluster.eps_multiplier);
        self.cluster.min_samples = o.min_samples.unwrap_or(self.cluster.min_samples);
        if o.no_full_stop {
            self.extraction.full_stop = false;
        }
        self.bootstrap.resamples = o.resamples.unwrap_or(self.bootstrap.resamples);
    }

    /// Checks values and that every referenced path exists.
    pub fn validate(&self) -> Result<Source<'_>> {
        if self.strategies.is_empty() {
            return Err(CliError::invalid("at least one strategy is required"));
        }
        self.cluster.validate().map_err(CliError::invalid)?;
        if !(self.extraction.row_tolerance_multiplier.is_finite() && self.extraction.row_tolerance_multiplier > 0.0) {
            return Err(CliError::invalid("extraction.row_tolerance_multiplier must be positive"));
        }
        if self.bootstrap.resamples == 0 {
            return Err(CliError::invalid("bootstrap.resamples must be at least 1"));
        }
        let source = match (&self.truth, &self.ocr_dir, &self.corpus) {
            (Some(truth), Some(ocr_dir), None) => Source::Files { truth, ocr_dir },
            (None, None, Some(corpus)) => Source::Corpus(corpus),
            _ => return Err(CliError::invalid("give either truth and ocr_dir, or corpus")),
        };
        let paths: Vec<&Path> = match source {
            Source::Files { truth, ocr_dir } => vec![truth, ocr_dir],
            Source::Corpus(c) => vec![c],
        };
        for p in paths {
            if !p.exists() {
                return Err(CliError::Io {
                    path: p.into(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory"),
                });
            }
        }
        Ok(source)
    }

    pub fn pipeline(&self) -> Pipeline {
        let delimiters =
            self.extraction.delimiters.clone().unwrap_or_else(|| DelimiterSet::standard(self.extraction.full_stop));
        Pipeline {
            cluster: self.cluster,
            extractor: Extractor {
                delimiters,
                row_tolerance_multiplier: self.extraction.row_tolerance_multiplier,
                ..Extractor::default()
            },
            fuzzy_max_dist: self.fuzzy_max_dist,
            ..Pipeline::default()
        }
    }

    pub fn bootstrap(&self) -> BootstrapConfig {
        BootstrapConfig { resamples: self.bootstrap.resamples, seed: self.seed }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }
}

fn set<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let mut cfg: RunConfig =
            toml::from_str("seed = 7\nstrategies = [\"line\"]\n[cluster]\nmin_samples = 5\n").unwrap();
        assert_eq!(cfg.cluster.eps_multiplier, 1.5);
        cfg.apply(&Overrides { seed: Some(9), strategies: Some(vec![Strategy::Raw]), ..Default::default() });
        assert_eq!((cfg.seed, cfg.strategies.clone(), cfg.cluster.min_samples), (9, vec![Strategy::Raw], 5));
    }

    #[test]
    fn echo_round_trips() {
        let cfg = RunConfig { corpus: Some("c.toml".into()), ..Default::default() };
        assert_eq!(toml::from_str::<RunConfig>(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("sead = 1").is_err());
    }

    #[test]
    fn needs_one_source() {
        let cfg = RunConfig::default();
        assert!(matches!(cfg.validate(), Err(CliError::Validation(_))));
        let cfg = RunConfig { strategies: vec![], ..Default::default() };
        assert!(matches!(cfg.validate(), Err(CliError::Validation(_))));
    }
}

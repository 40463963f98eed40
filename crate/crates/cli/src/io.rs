//! File loading with content hashes and byte-offset parse errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use labeleval_core::ingest::{normalize_engine_output, CocoDataset, EngineOutput};
use labeleval_core::model::OcrDocument;
use labeleval_core::synthgen::CorpusSpec;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// An input file and the SHA-256 of its bytes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

impl InputHash {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        let digest = Sha256::digest(bytes);
        InputHash { path: path.display().to_string(), sha256: format!("{digest:x}") }
    }
}

pub fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(CliError::io(path))
}

pub fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    }
    fs::write(path, contents).map_err(CliError::io(path))
}

/// Byte offset of a 1-based (line, column) position as reported by serde_json.
fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    let line_start: usize = bytes.split(|&b| b == b'\n').take(line.saturating_sub(1)).map(|l| l.len() + 1).sum();
    (line_start + column.saturating_sub(1)).min(bytes.len())
}

/// Parses JSON, reporting failures with the byte offset of the error.
pub fn parse_json<T: DeserializeOwned>(bytes: &[u8]) -> std::result::Result<T, String> {
    serde_json::from_slice(bytes).map_err(|e| {
        let offset = byte_offset(bytes, e.line(), e.column());
        format!("{e} (byte offset {offset})")
    })
}

pub fn parse_toml<T: DeserializeOwned>(bytes: &[u8]) -> std::result::Result<T, String> {
    let text = std::str::from_utf8(bytes).map_err(|e| format!("not UTF-8 at byte offset {}", e.valid_up_to()))?;
    toml::from_str(text).map_err(|e| match e.span() {
        Some(span) => format!("{} (byte offset {})", e.message(), span.start),
        None => e.message().to_string(),
    })
}

fn is_toml(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"))
}

/// Loads and validates a COCO annotation file.
pub fn load_coco(path: &Path) -> Result<(CocoDataset, InputHash)> {
    let bytes = read(path)?;
    let ds: CocoDataset = parse_json(&bytes).map_err(|e| CliError::InvalidFiles(vec![(path.into(), e)]))?;
    ds.validate().map_err(|e| CliError::InvalidFiles(vec![(path.into(), e.to_string())]))?;
    Ok((ds, InputHash::of(path, &bytes)))
}

/// Loads a synthetic corpus spec, JSON or TOML by extension.
pub fn load_corpus_spec(path: &Path) -> Result<(CorpusSpec, InputHash)> {
    let bytes = read(path)?;
    let spec = if is_toml(path) { parse_toml(&bytes) } else { parse_json(&bytes) };
    let spec = spec.map_err(|e| CliError::InvalidFiles(vec![(path.into(), e)]))?;
    Ok((spec, InputHash::of(path, &bytes)))
}

/// OCR documents grouped by engine id, each list sorted by image id.
pub type EngineDocuments = BTreeMap<String, Vec<OcrDocument>>;

/// Loads every `*.json` interchange document under `dir` (not recursive).
/// Every bad file is reported, not just the first.
pub fn load_ocr_dir(dir: &Path) -> Result<(EngineDocuments, Vec<InputHash>)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(CliError::io(dir))?
        .map(|e| e.map(|e| e.path()).map_err(CliError::io(dir)))
        .collect::<Result<Vec<_>>>()?;
    paths.retain(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")));
    paths.sort();

    let mut engines = EngineDocuments::new();
    let mut hashes = Vec::new();
    let mut bad = Vec::new();
    let mut seen: BTreeMap<(String, String), PathBuf> = BTreeMap::new();
    for path in paths {
        let bytes = read(&path)?;
        let doc = parse_json::<EngineOutput>(&bytes).and_then(|raw| {
            let doc = normalize_engine_output(&raw).map_err(|e| e.to_string())?;
            doc.validate().map_err(|e| e.to_string())?;
            Ok(doc)
        });
        match doc {
            Ok(doc) => {
                let key = (doc.engine_id.clone(), doc.image_id.clone());
                if let Some(first) = seen.insert(key, path.clone()) {
                    bad.push((
                        path.clone(),
                        format!("duplicate image_id {} (also in {})", doc.image_id, first.display()),
                    ));
                    continue;
                }
                hashes.push(InputHash::of(&path, &bytes));
                engines.entry(doc.engine_id.clone()).or_default().push(doc);
            }
            Err(e) => bad.push((path, e)),
        }
    }
    if !bad.is_empty() {
        return Err(CliError::InvalidFiles(bad));
    }
    for docs in engines.values_mut() {
        docs.sort_by(|a, b| a.image_id.cmp(&b.image_id));
    }
    Ok((engines, hashes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_follow_lines() {
        let text = b"{\n  \"a\": 1,\n  \"b\": ?\n}";
        let err = parse_json::<serde_json::Value>(text).unwrap_err();
        let offset = text.iter().position(|&b| b == b'?').unwrap();
        assert!(err.ends_with(&format!("(byte offset {offset})")), "{err}");
    }

    #[test]
    fn toml_errors_carry_offsets() {
        let err = parse_toml::<CorpusSpec>(b"count = 3\nseed = \"x\"\n").unwrap_err();
        assert!(err.contains("byte offset 17"), "{err}");
    }
}

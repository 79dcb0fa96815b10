//! Dataset files: one JSON sample per line plus a sidecar manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::sample::{validate, AnnotatedSample};
use crate::synth::{gen_dataset, GenConfig, SplitSizes};
use crate::taxonomy::{DatasetKind, Split};

pub const GENERATOR_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub dataset_kind: DatasetKind,
    pub base_seed: u64,
    pub config: GenConfig,
    pub counts: BTreeMap<Split, usize>,
    pub generator_version: String,
    /// SHA-256 of the JSONL bytes, hex encoded.
    pub checksum: String,
}

impl Manifest {
    pub fn sizes(&self) -> SplitSizes {
        let get = |s| self.counts.get(&s).copied().unwrap_or(0);
        SplitSizes {
            train: get(Split::Train),
            validation: get(Split::Validation),
            test: get(Split::Test),
        }
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

/// `trend.jsonl` -> `trend.manifest.json`.
pub fn manifest_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.manifest.json"))
}

pub fn checksum(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Serialize samples as newline-terminated JSONL.
pub fn to_jsonl(samples: &[AnnotatedSample]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for s in samples {
        serde_json::to_writer(&mut out, s)?;
        out.push(b'\n');
    }
    Ok(out)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(bytes).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// Write `samples` to `path` and the manifest next to it.
pub fn write_dataset(samples: &[AnnotatedSample], config: &GenConfig, path: &Path) -> Result<Manifest> {
    let kind = samples
        .first()
        .map(|s| s.dataset_kind)
        .ok_or(Error::Empty("no samples to write"))?;
    let mut counts = BTreeMap::new();
    for s in samples {
        if s.dataset_kind != kind {
            return Err(Error::Dataset {
                path: path.into(),
                message: format!("mixed dataset kinds {kind} and {}", s.dataset_kind),
            });
        }
        if let Some(v) = validate(s).first() {
            return Err(Error::Dataset {
                path: path.into(),
                message: format!("sample {} invalid: {v}", s.id),
            });
        }
        *counts.entry(s.split).or_insert(0) += 1;
    }
    let bytes = to_jsonl(samples)?;
    let manifest = Manifest {
        dataset_kind: kind,
        base_seed: config.base_seed,
        config: *config,
        counts,
        generator_version: GENERATOR_VERSION.to_string(),
        checksum: checksum(&bytes),
    };
    write_file(path, &bytes)?;
    let mut m = serde_json::to_vec_pretty(&manifest)?;
    m.push(b'\n');
    write_file(&manifest_path(path), &m)?;
    Ok(manifest)
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let mpath = manifest_path(path);
    let text = fs::read_to_string(&mpath).map_err(|e| Error::io(&mpath, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Dataset {
        path: mpath,
        message: format!("bad manifest: {e}"),
    })
}

/// Read, verify against the manifest, and validate every sample.
pub fn read_dataset(path: &Path) -> Result<(Vec<AnnotatedSample>, Manifest)> {
    let manifest = read_manifest(path)?;
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::Dataset {
        path: path.into(),
        message: format!("not UTF-8: {e}"),
    })?;
    let dataset_err = |message: String| Error::Dataset {
        path: path.into(),
        message,
    };
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let s: AnnotatedSample = serde_json::from_str(line).map_err(|e| Error::parse(i + 1, e.to_string()))?;
        if let Some(v) = validate(&s).first() {
            return Err(Error::parse(i + 1, format!("sample {} invalid: {v}", s.id)));
        }
        samples.push(s);
    }
    if samples.len() != manifest.total() {
        return Err(dataset_err(format!(
            "manifest lists {} samples, file has {}",
            manifest.total(),
            samples.len()
        )));
    }
    let actual = checksum(&bytes);
    if actual != manifest.checksum {
        return Err(dataset_err(format!(
            "checksum mismatch: manifest {}, file {actual}",
            manifest.checksum
        )));
    }
    Ok((samples, manifest))
}

/// Generate the samples a manifest describes.
pub fn regenerate(manifest: &Manifest) -> Result<Vec<AnnotatedSample>> {
    gen_dataset(manifest.dataset_kind, manifest.sizes(), &manifest.config)
}

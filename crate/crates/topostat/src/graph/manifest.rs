//! Dataset manifests: a small `key = value` text file pointing at an edge
//! list, so that expected sizes and checksums travel with the data.
//!
//! ```text
//! # comments allowed
//! name = cit-HepPh
//! path = cit-HepPh.txt
//! format = snap
//! sha256 = 9a0f...
//! expected_n = 34546
//! expected_m = 421534
//! ```
//!
//! `path` is resolved relative to the manifest's directory. A checksum
//! mismatch produces a warning (the file may be a re-export with different
//! line endings); an `expected_n`/`expected_m` mismatch is a data error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::parse::{parse_edge_list, EdgeListFormat};
use crate::graph::DirectedGraph;

#[derive(Clone, Debug, Default)]
pub struct DatasetManifest {
    pub name: Option<String>,
    pub path: String,
    pub format: Option<EdgeListFormat>,
    pub sha256: Option<String>,
    pub expected_n: Option<u64>,
    pub expected_m: Option<u64>,
}

/// A dataset ready for analysis, with any non-fatal observations collected
/// during loading (currently only checksum mismatches).
#[derive(Debug)]
pub struct LoadedDataset {
    pub graph: DirectedGraph,
    pub name: String,
    pub warnings: Vec<String>,
}

/// Decide whether file content is a manifest rather than an edge list: the
/// first line that is neither blank nor a `#`/`%` comment must look like
/// `identifier = value`.
pub fn is_manifest(content: &str) -> bool {
    for line in content.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        return match line.split_once('=') {
            Some((key, _)) => {
                let key = key.trim();
                !key.is_empty()
                    && key.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    && key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            }
            None => false,
        };
    }
    false
}

pub fn parse_manifest(content: &str) -> Result<DatasetManifest> {
    let mut manifest = DatasetManifest::default();
    let mut saw_path = false;
    for (idx, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            msg: "expected `key = value`".into(),
        })?;
        let (key, value) = (key.trim().to_ascii_lowercase(), value.trim());
        match key.as_str() {
            "name" => manifest.name = Some(value.to_string()),
            "path" => {
                manifest.path = value.to_string();
                saw_path = true;
            }
            "format" => {
                manifest.format = Some(value.parse().map_err(|e| Error::Parse {
                    line: idx + 1,
                    msg: format!("{e}"),
                })?)
            }
            "sha256" => manifest.sha256 = Some(value.to_ascii_lowercase()),
            "expected_n" | "expected_m" => {
                let parsed = value.parse::<u64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("{key} must be a non-negative integer, got {value:?}"),
                })?;
                if key == "expected_n" {
                    manifest.expected_n = Some(parsed);
                } else {
                    manifest.expected_m = Some(parsed);
                }
            }
            other => {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("unknown manifest key {other:?}"),
                })
            }
        }
    }
    if !saw_path {
        return Err(Error::data("manifest is missing the required `path` key"));
    }
    Ok(manifest)
}

/// Load a dataset from either a raw edge list or a manifest, sniffing which
/// one `path` is. `format_override` wins over the manifest's `format`;
/// plain edge lists default to SNAP.
pub fn load_dataset(
    path: &Path,
    format_override: Option<EdgeListFormat>,
) -> Result<LoadedDataset> {
    let content = std::fs::read(path)?;
    let head = String::from_utf8_lossy(&content);
    let mut warnings = Vec::new();

    let (data, data_path, manifest) = if is_manifest(&head) {
        let manifest = parse_manifest(&head)?;
        let data_path: PathBuf = {
            let rel = Path::new(&manifest.path);
            if rel.is_absolute() {
                rel.to_path_buf()
            } else {
                path.parent().unwrap_or(Path::new(".")).join(rel)
            }
        };
        let data = std::fs::read(&data_path)?;
        if let Some(expected) = &manifest.sha256 {
            let actual = hex_digest(&data);
            if &actual != expected {
                warnings.push(format!(
                    "checksum mismatch for {}: manifest says {expected}, file is {actual}",
                    data_path.display()
                ));
            }
        }
        (data, data_path, Some(manifest))
    } else {
        (content, path.to_path_buf(), None)
    };

    let format = format_override
        .or(manifest.as_ref().and_then(|m| m.format))
        .unwrap_or(EdgeListFormat::Snap);
    let raw = parse_edge_list(&data[..], format)?;
    let graph = DirectedGraph::preprocess(&raw)?;

    if let Some(m) = &manifest {
        if let Some(expected_n) = m.expected_n {
            if graph.n() as u64 != expected_n {
                return Err(Error::data(format!(
                    "preprocessed node count {} does not match expected_n {expected_n}",
                    graph.n()
                )));
            }
        }
        if let Some(expected_m) = m.expected_m {
            if graph.m() as u64 != expected_m {
                return Err(Error::data(format!(
                    "preprocessed edge count {} does not match expected_m {expected_m}",
                    graph.m()
                )));
            }
        }
    }

    let name = manifest
        .and_then(|m| m.name)
        .or_else(|| {
            data_path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
        })
        .unwrap_or_else(|| "dataset".to_string());

    Ok(LoadedDataset { graph, name, warnings })
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

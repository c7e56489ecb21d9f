//! Ingestion of zero-ordinate tables.
//!
//! Published tables of the imaginary parts of the non-trivial zeta zeros
//! (Odlyzko's tables, LMFDB exports) are plain text with one ordinate per
//! line, sometimes with a leading integer index column. This module parses
//! and validates that format and keeps a byte cache for tables fetched
//! over HTTP, keyed by a digest of the source URL.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Environment variable overriding the default cache directory.
pub const CACHE_ENV: &str = "ZETA_SPECTRA_CACHE";

/// Every genuine ordinate exceeds this bound (the first is ~14.13); values
/// at or below it indicate an index column or offsets parsed as ordinates.
const MIN_ORDINATE: f64 = 14.0;

/// Ordered ordinates of non-trivial zeros, with provenance.
///
/// Immutable after construction; shareable across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    values: Vec<f64>,
    source: String,
}

impl ZeroTable {
    /// Validates and wraps a list of ordinates.
    pub fn new(values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validation("zero table is empty".into()));
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v <= MIN_ORDINATE {
                return Err(Error::Validation(format!(
                    "ordinate {} at position {} is not a plausible zero ordinate (must exceed {})",
                    v,
                    i + 1,
                    MIN_ORDINATE
                )));
            }
            if i > 0 && values[i - 1] >= v {
                return Err(Error::Validation(format!(
                    "ordinates must be strictly increasing: values[{}] = {} >= values[{}] = {}",
                    i,
                    values[i - 1],
                    i + 1,
                    v
                )));
            }
        }
        Ok(ZeroTable {
            values,
            source: source.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// The ordinate of the j-th zero, 1-based.
    pub fn gamma(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    /// First `n` ordinates.
    pub fn prefix(&self, n: usize) -> Result<&[f64]> {
        if n == 0 || n > self.values.len() {
            return Err(Error::Validation(format!(
                "requested prefix length {} outside 1..={} (table {})",
                n,
                self.values.len(),
                self.source
            )));
        }
        Ok(&self.values[..n])
    }

    /// Serializes to the plain one-column text form, one ordinate per line.
    ///
    /// Values print in shortest round-trip form, so `parse(to_text())`
    /// recovers the table exactly.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in &self.values {
            s.push_str(&format!("{v}\n"));
        }
        s
    }

    /// Reads and parses a table from a file.
    pub fn from_file(path: &Path, limit: Option<usize>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        parse_text(&text, limit, &path.display().to_string())
    }
}

/// Parses a whitespace-delimited table of ordinates.
///
/// The first non-blank line decides the column layout for the whole file:
/// one column (ordinates only) or two (index then ordinate). Mixed layouts
/// are rejected as corruption. `limit` stops after that many ordinates.
pub fn parse_zero_table(mut raw_text: impl Read, limit: Option<usize>) -> Result<ZeroTable> {
    let mut buf = String::new();
    raw_text
        .read_to_string(&mut buf)
        .map_err(|e| Error::Parse {
            line: 0,
            msg: format!("input is not valid UTF-8 text: {e}"),
        })?;
    parse_text(&buf, limit, "<memory>")
}

fn parse_text(text: &str, limit: Option<usize>, source: &str) -> Result<ZeroTable> {
    let mut values: Vec<f64> = Vec::new();
    let mut indexed: Option<bool> = None;
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(limit) = limit {
            if values.len() >= limit {
                break;
            }
        }
        let lineno = lineno + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let has_index = *indexed.get_or_insert(tokens.len() == 2);
        let ordinate_tok = match (has_index, tokens.as_slice()) {
            (false, [v]) => v,
            (true, [idx, v]) => {
                idx.parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("index column {idx:?} is not an integer"),
                })?;
                v
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!(
                        "expected {} column(s), found {}",
                        if has_index { 2 } else { 1 },
                        tokens.len()
                    ),
                })
            }
        };
        let v: f64 = ordinate_tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("non-numeric token {ordinate_tok:?}"),
        })?;
        values.push(v);
    }
    ZeroTable::new(values, source)
}

/// Default cache directory: `$ZETA_SPECTRA_CACHE` or a fixed path under
/// the system temp directory.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("zeta-spectra-cache"))
}

fn cache_paths(url: &str, cache_dir: &Path) -> (PathBuf, PathBuf) {
    let digest = hex::encode(Sha256::digest(url.as_bytes()));
    (
        cache_dir.join(format!("{digest}.txt")),
        cache_dir.join(format!("{digest}.meta")),
    )
}

/// Fetches a table over HTTP with a local byte cache.
///
/// The raw response bytes are cached under a digest of `url`, so later
/// calls (including offline ones) parse from disk and can apply a
/// different `limit`. Cache writes go through a temp file and rename;
/// concurrent readers never observe partial entries.
pub fn fetch_zero_table(url: &str, cache_dir: &Path, limit: Option<usize>) -> Result<ZeroTable> {
    let (data_path, meta_path) = cache_paths(url, cache_dir);
    let bytes = if data_path.exists() {
        let bytes = fs::read(&data_path)?;
        let meta = fs::read_to_string(&meta_path).map_err(|_| {
            Error::CacheIntegrity(format!(
                "cache entry {} has no readable meta file",
                data_path.display()
            ))
        })?;
        let recorded: Option<u64> = meta
            .lines()
            .find_map(|l| l.strip_prefix("bytes="))
            .and_then(|v| v.parse().ok());
        if recorded != Some(bytes.len() as u64) {
            return Err(Error::CacheIntegrity(format!(
                "cache entry {} is {} bytes but meta records {:?}",
                data_path.display(),
                bytes.len(),
                recorded
            )));
        }
        bytes
    } else {
        let bytes = http_get(url)?;
        fs::create_dir_all(cache_dir)?;
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let meta = format!(
            "url={url}\nretrieved_at_unix={now}\nbytes={}\n",
            bytes.len()
        );
        // Meta lands first: a torn write then looks like a cache miss
        // instead of a corrupt entry.
        write_atomic(&meta_path, meta.as_bytes())?;
        write_atomic(&data_path, &bytes)?;
        bytes
    };
    let mut table = parse_zero_table(bytes.as_slice(), limit)?;
    table.source = url.to_string();
    Ok(table)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn http_get(url: &str) -> Result<Vec<u8>> {
    let resp = reqwest::blocking::get(url)
        .and_then(|r| r.error_for_status())
        .map_err(|e| Error::Transport(format!("GET {url}: {e}")))?;
    let bytes = resp
        .bytes()
        .map_err(|e| Error::Transport(format!("reading body of {url}: {e}")))?;
    Ok(bytes.to_vec())
}

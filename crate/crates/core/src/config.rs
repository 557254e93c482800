//! Plain-text configuration formats.
//!
//! Two shapes are used throughout the crate: *list files* (one entry per
//! line, `#` starts a comment line) for tags, patterns and stop words, and
//! *key-value files* (`key = value`, lists comma-separated) for extraction
//! and filtering settings.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Parses list-file content: trimmed, non-empty lines that do not start with `#`.
pub fn parse_list(content: &str) -> Vec<String> {
    content
        .lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(str::to_string)
        .collect()
}

pub fn read_list(path: &Path) -> Result<Vec<String>> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_list(&content))
}

/// One `key = value` entry with the line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

impl Entry {
    /// Comma-separated items, trimmed, empties dropped.
    pub fn list(&self) -> Vec<String> {
        self.value.split(',').map(str::trim).filter(|item| !item.is_empty()).map(str::to_string).collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    pub source: PathBuf,
    pub entries: Vec<Entry>,
}

impl KeyValues {
    pub fn parse(source: impl Into<PathBuf>, content: &str) -> Result<Self> {
        let source = source.into();
        let mut entries = Vec::new();
        for (idx, raw) in content.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config {
                    path: source,
                    line: idx + 1,
                    message: format!("expected `key = value`, found {line:?}"),
                });
            };
            entries.push(Entry {
                key: key.trim().to_ascii_lowercase(),
                value: value.trim().to_string(),
                line: idx + 1,
            });
        }
        Ok(KeyValues { source, entries })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(path, &content)
    }

    pub fn error(&self, entry: &Entry, message: impl Into<String>) -> Error {
        Error::Config { path: self.source.clone(), line: entry.line, message: message.into() }
    }

    pub fn parse_bool(&self, entry: &Entry) -> Result<bool> {
        match entry.value.to_ascii_lowercase().as_str() {
            "true" | "yes" | "on" | "1" => Ok(true),
            "false" | "no" | "off" | "0" => Ok(false),
            other => Err(self.error(entry, format!("{}: expected a boolean, found {other:?}", entry.key))),
        }
    }

    pub fn parse_f64(&self, entry: &Entry) -> Result<f64> {
        entry
            .value
            .parse()
            .map_err(|_| self.error(entry, format!("{}: expected a number, found {:?}", entry.key, entry.value)))
    }

    pub fn parse_usize(&self, entry: &Entry) -> Result<usize> {
        entry
            .value
            .parse()
            .map_err(|_| self.error(entry, format!("{}: expected an integer, found {:?}", entry.key, entry.value)))
    }
}

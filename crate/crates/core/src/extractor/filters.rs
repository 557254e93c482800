use std::collections::BTreeSet;
use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::config::KeyValues;
use crate::corpus::{Comment, CommentKind};
use crate::error::{Error, Result};
use crate::matchers::{find_tag, MatchStrategy, TagSet};
use crate::textprep::{preprocess, tokenize};

pub const DEFAULT_LICENSE_KEYWORDS: [&str; 6] = ["license", "copyright", "redistribution", "warranty", "gnu", "apache"];

pub const DEFAULT_IDE_TEXTS: [&str; 6] = [
    "Auto-generated method stub",
    "Auto-generated catch block",
    "Auto-generated constructor stub",
    "TODO Auto-generated method stub",
    "TODO Auto-generated catch block",
    "TODO Auto-generated constructor stub",
];

/// Why a comment was removed. Variants are listed in the order the rules run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DropReason {
    License,
    CommentedCode,
    IdeGenerated,
    DocWithoutTag,
}

impl DropReason {
    pub const ALL: [DropReason; 4] =
        [DropReason::License, DropReason::CommentedCode, DropReason::IdeGenerated, DropReason::DocWithoutTag];

    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::License => "license",
            DropReason::CommentedCode => "commented-code",
            DropReason::IdeGenerated => "ide-generated",
            DropReason::DocWithoutTag => "doc-without-tag",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodeHeuristics {
    pub enabled: bool,
    /// Minimum fraction of non-empty lines that must look like code.
    pub min_ratio: f64,
    pub line_endings: Vec<String>,
}

impl Default for CodeHeuristics {
    fn default() -> Self {
        CodeHeuristics { enabled: true, min_ratio: 0.5, line_endings: vec![";".into(), "{".into(), "}".into()] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig {
    pub license_enabled: bool,
    pub license_keywords: BTreeSet<String>,
    /// Distinct keywords required before a comment counts as a license header.
    pub license_min_keywords: usize,
    pub code: CodeHeuristics,
    pub ide_enabled: bool,
    pub ide_generated_texts: BTreeSet<String>,
    pub doc_enabled: bool,
    /// Tags that exempt a doc comment from removal (matched fuzzily).
    pub doc_tag_exception: TagSet,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            license_enabled: true,
            license_keywords: DEFAULT_LICENSE_KEYWORDS.iter().map(|s| s.to_string()).collect(),
            license_min_keywords: 2,
            code: CodeHeuristics::default(),
            ide_enabled: true,
            ide_generated_texts: DEFAULT_IDE_TEXTS.iter().map(|s| s.to_string()).collect(),
            doc_enabled: true,
            doc_tag_exception: TagSet::default(),
        }
    }
}

impl FilterConfig {
    /// Overrides defaults from `key = value` entries; unknown keys are left
    /// for other consumers of the same file.
    pub fn apply(&mut self, kv: &KeyValues) -> Result<()> {
        for entry in &kv.entries {
            match entry.key.as_str() {
                "license_filter" => self.license_enabled = kv.parse_bool(entry)?,
                "license_keywords" => {
                    self.license_keywords = entry.list().into_iter().map(|k| k.to_lowercase()).collect()
                }
                "license_min_keywords" => self.license_min_keywords = kv.parse_usize(entry)?,
                "code_filter" => self.code.enabled = kv.parse_bool(entry)?,
                "code_min_ratio" => {
                    let ratio = kv.parse_f64(entry)?;
                    if !(0.0..=1.0).contains(&ratio) {
                        return Err(kv.error(entry, "code_min_ratio must lie in [0, 1]"));
                    }
                    self.code.min_ratio = ratio;
                }
                "code_line_endings" => self.code.line_endings = entry.list(),
                "ide_filter" => self.ide_enabled = kv.parse_bool(entry)?,
                "ide_generated_texts" => self.ide_generated_texts = entry.list().into_iter().collect(),
                "doc_filter" => self.doc_enabled = kv.parse_bool(entry)?,
                "doc_tags" => self.doc_tag_exception = TagSet::new(entry.list())?,
                _ => {}
            }
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if self.license_enabled && (self.license_keywords.is_empty() || self.license_min_keywords == 0) {
            return Err(Error::InvalidInput(
                "license filter enabled with no keywords or a zero keyword threshold".into(),
            ));
        }
        Ok(())
    }
}

static CODE_SHAPE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(?:(?:[A-Za-z_$][\w$.<>\[\]]*\s+)?[A-Za-z_$][\w$.\[\]]*\s*=[^=].*|[A-Za-z_$][\w$.]*\(.*\)\s*;?)$")
        .expect("valid regex")
});

fn is_license(comment: &Comment, config: &FilterConfig) -> bool {
    let tokens = tokenize(&comment.text);
    let hits: BTreeSet<&str> =
        tokens.iter().map(String::as_str).filter(|t| config.license_keywords.contains(*t)).collect();
    hits.len() >= config.license_min_keywords
}

/// True when enough non-empty lines end like a statement or have an
/// assignment/call shape. Leading `*` decorations are ignored.
pub fn looks_like_code(text: &str, heuristics: &CodeHeuristics) -> bool {
    let lines: Vec<&str> =
        text.lines().map(|l| l.trim().trim_start_matches('*').trim()).filter(|l| !l.is_empty()).collect();
    if lines.is_empty() {
        return false;
    }
    let code = lines
        .iter()
        .filter(|l| heuristics.line_endings.iter().any(|e| l.ends_with(e.as_str())) || CODE_SHAPE.is_match(l))
        .count();
    code as f64 >= heuristics.min_ratio * lines.len() as f64
}

/// First rule that removes `comment`, if any.
pub fn drop_reason(comment: &Comment, config: &FilterConfig) -> Option<DropReason> {
    if config.license_enabled && is_license(comment, config) {
        return Some(DropReason::License);
    }
    if config.code.enabled && looks_like_code(&comment.text, &config.code) {
        return Some(DropReason::CommentedCode);
    }
    if config.ide_enabled && config.ide_generated_texts.contains(comment.text.trim()) {
        return Some(DropReason::IdeGenerated);
    }
    if config.doc_enabled
        && comment.kind == CommentKind::Doc
        && find_tag(preprocess(&comment.text).as_slice(), &config.doc_tag_exception, MatchStrategy::Fuzzy).is_none()
    {
        return Some(DropReason::DocWithoutTag);
    }
    None
}

/// Splits `comments` into kept and dropped, preserving order in both.
pub fn apply_filters(comments: Vec<Comment>, config: &FilterConfig) -> (Vec<Comment>, Vec<(Comment, DropReason)>) {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for comment in comments {
        match drop_reason(&comment, config) {
            Some(reason) => dropped.push((comment, reason)),
            None => kept.push(comment),
        }
    }
    (kept, dropped)
}

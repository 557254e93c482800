//! Comment extraction from source files and the filtering rules that turn
//! raw comments into a classification-ready corpus.

mod filters;
mod lexer;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::corpus::{Comment, Corpus};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};

pub use filters::{
    apply_filters, drop_reason, looks_like_code, CodeHeuristics, DropReason, FilterConfig, DEFAULT_IDE_TEXTS,
    DEFAULT_LICENSE_KEYWORDS,
};
pub use lexer::{extract_comments, group_consecutive, Extraction, LanguageProfile, Warning};

/// Counts reported after a scan.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub files: usize,
    pub extracted: usize,
    pub grouped: usize,
    pub kept: usize,
    pub dropped: BTreeMap<DropReason, usize>,
}

#[derive(Debug, Clone)]
pub struct ScanOutput {
    pub corpus: Corpus,
    pub dropped: Vec<(Comment, DropReason)>,
    pub summary: ScanSummary,
    pub warnings: Vec<Warning>,
}

struct FileScan {
    extracted: usize,
    kept: Vec<Comment>,
    dropped: Vec<(Comment, DropReason)>,
    warnings: Vec<Warning>,
}

fn scan_one(path: &Path, profile: &LanguageProfile, filters: &FilterConfig) -> Result<FileScan> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut warnings = Vec::new();
    let text = match String::from_utf8(bytes) {
        Ok(text) => text,
        Err(e) => {
            warnings.push(Warning {
                file: path.to_path_buf(),
                line: 0,
                message: "invalid UTF-8; decoded lossily".into(),
            });
            String::from_utf8_lossy(e.as_bytes()).into_owned()
        }
    };
    let extraction = extract_comments(&text, profile, path);
    warnings.extend(extraction.warnings);
    let extracted = extraction.comments.len();
    let (kept, dropped) = apply_filters(group_consecutive(extraction.comments), filters);
    Ok(FileScan { extracted, kept, dropped, warnings })
}

/// Extracts, groups and filters every file in `files` (in the given order)
/// into one corpus for `project`. Files are processed independently and
/// merged in input order; ids run 1..N across the whole scan.
pub fn scan_files(
    project: &str,
    files: &[PathBuf],
    profile: &LanguageProfile,
    filters: &FilterConfig,
    execution: Execution,
) -> Result<ScanOutput> {
    let scans: Vec<FileScan> =
        exec::map_with(execution, files, |path| scan_one(path, profile, filters)).into_iter().collect::<Result<_>>()?;

    let mut summary = ScanSummary {
        files: files.len(),
        dropped: DropReason::ALL.iter().map(|r| (*r, 0)).collect(),
        ..ScanSummary::default()
    };
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut warnings = Vec::new();
    let mut next_id = 1;
    for scan in scans {
        summary.extracted += scan.extracted;
        summary.grouped += scan.kept.len() + scan.dropped.len();
        for mut comment in scan.kept {
            comment.project = project.to_string();
            comment.id = next_id;
            next_id += 1;
            kept.push(comment);
        }
        for (mut comment, reason) in scan.dropped {
            comment.project = project.to_string();
            *summary.dropped.entry(reason).or_default() += 1;
            dropped.push((comment, reason));
        }
        warnings.extend(scan.warnings);
    }
    summary.kept = kept.len();
    let corpus = Corpus::new(project, kept)?;
    Ok(ScanOutput { corpus, dropped, summary, warnings })
}

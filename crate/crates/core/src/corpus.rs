//! Comments, labels and the corpus file formats.
//!
//! The canonical on-disk format is JSON Lines: one object per comment with
//! keys `project`, `id`, `text`, `kind`, and optionally `label`, `file`,
//! `start_line`, `end_line`. Unknown keys are ignored on read.
//!
//! The public benchmark is distributed as parallel plain-text files (one
//! comment per line, one label per line); [`import_benchmark`] pairs them.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "SATD")]
    Satd,
    #[serde(rename = "NonSATD")]
    NonSatd,
}

impl Label {
    pub fn is_satd(self) -> bool {
        self == Label::Satd
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Satd => "SATD",
            Label::NonSatd => "NonSATD",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommentKind {
    Line,
    Block,
    Doc,
}

impl CommentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CommentKind::Line => "line",
            CommentKind::Block => "block",
            CommentKind::Doc => "doc",
        }
    }
}

impl FromStr for CommentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "line" => Ok(CommentKind::Line),
            "block" => Ok(CommentKind::Block),
            "doc" => Ok(CommentKind::Doc),
            other => Err(Error::InvalidInput(format!("unknown comment kind {other:?}"))),
        }
    }
}

/// Where an extracted comment lives. Lines are 1-based and inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Origin {
    pub file: PathBuf,
    pub start_line: usize,
    pub end_line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comment {
    pub project: String,
    pub id: u64,
    pub text: String,
    pub kind: CommentKind,
    /// Present iff the comment came from source extraction.
    pub origin: Option<Origin>,
    pub gold_label: Option<Label>,
}

impl Comment {
    pub fn new(project: impl Into<String>, id: u64, text: impl Into<String>, kind: CommentKind) -> Self {
        Comment { project: project.into(), id, text: text.into(), kind, origin: None, gold_label: None }
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.gold_label = Some(label);
        self
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = Some(origin);
        self
    }

    /// `(project, id)`, the join key used by evaluation.
    pub fn key(&self) -> (&str, u64) {
        (&self.project, self.id)
    }
}

/// An ordered, validated collection of comments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    name: String,
    comments: Vec<Comment>,
    labeled: bool,
}

impl Corpus {
    /// Validates the invariants: non-blank texts, unique `(project, id)`,
    /// and labels on every comment or on none.
    pub fn new(name: impl Into<String>, comments: Vec<Comment>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(comments.len());
        for c in &comments {
            if c.text.trim().is_empty() {
                return Err(Error::InvalidComment(format!("comment {:?}/{} has blank text", c.project, c.id)));
            }
            if !seen.insert((c.project.as_str(), c.id)) {
                return Err(Error::DuplicateId { project: c.project.clone(), id: c.id });
            }
        }
        let labeled_count = comments.iter().filter(|c| c.gold_label.is_some()).count();
        if labeled_count != 0 && labeled_count != comments.len() {
            let missing = comments.iter().find(|c| c.gold_label.is_none()).expect("some unlabeled");
            return Err(Error::MissingLabel { project: missing.project.clone(), id: missing.id });
        }
        let labeled = !comments.is_empty() && labeled_count == comments.len();
        Ok(Corpus { name: name.into(), comments, labeled })
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Corpus { name: name.into(), comments: Vec::new(), labeled: false }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn comments(&self) -> &[Comment] {
        &self.comments
    }

    pub fn len(&self) -> usize {
        self.comments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comments.is_empty()
    }

    pub fn is_labeled(&self) -> bool {
        self.labeled
    }

    pub fn satd_count(&self) -> usize {
        self.comments.iter().filter(|c| c.gold_label == Some(Label::Satd)).count()
    }

    /// Distinct project names in first-appearance order.
    pub fn projects(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.comments.iter().filter(|c| seen.insert(c.project.as_str())).map(|c| c.project.as_str()).collect()
    }

    /// Splits a multi-project corpus into one corpus per project, in
    /// first-appearance order. Comment order within a project is preserved.
    pub fn split_by_project(&self) -> Vec<Corpus> {
        let mut groups: BTreeMap<&str, (usize, Vec<Comment>)> = BTreeMap::new();
        for (idx, c) in self.comments.iter().enumerate() {
            groups.entry(c.project.as_str()).or_insert_with(|| (idx, Vec::new())).1.push(c.clone());
        }
        let mut groups: Vec<_> = groups.into_iter().collect();
        groups.sort_by_key(|(_, (first, _))| *first);
        groups
            .into_iter()
            .map(|(project, (_, comments))| Corpus { name: project.to_string(), labeled: self.labeled, comments })
            .collect()
    }

    /// Concatenates corpora; fails on a `(project, id)` collision.
    pub fn concat(name: impl Into<String>, parts: &[Corpus]) -> Result<Corpus> {
        let comments = parts.iter().flat_map(|c| c.comments.iter().cloned()).collect();
        Corpus::new(name, comments)
    }
}

/// Raw label strings accepted for each class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMapping {
    satd: BTreeSet<String>,
    nonsatd: BTreeSet<String>,
}

impl LabelMapping {
    pub fn new<I, J, S, T>(satd: I, nonsatd: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let satd: BTreeSet<String> = satd.into_iter().map(Into::into).collect();
        let nonsatd: BTreeSet<String> = nonsatd.into_iter().map(Into::into).collect();
        if satd.is_empty() || nonsatd.is_empty() {
            return Err(Error::InvalidLabelMapping("both label sets must be non-empty".into()));
        }
        if let Some(both) = satd.intersection(&nonsatd).next() {
            return Err(Error::InvalidLabelMapping(format!("{both:?} maps to both classes")));
        }
        Ok(LabelMapping { satd, nonsatd })
    }

    /// Reads a key-value file with `satd = ...` and `nonsatd = ...` lists.
    pub fn from_file(path: &Path) -> Result<Self> {
        let kv = config::KeyValues::read(path)?;
        let mut satd = Vec::new();
        let mut nonsatd = Vec::new();
        for entry in &kv.entries {
            match entry.key.as_str() {
                "satd" | "positive" => satd.extend(entry.list()),
                "nonsatd" | "negative" => nonsatd.extend(entry.list()),
                other => return Err(kv.error(entry, format!("unknown key {other:?}"))),
            }
        }
        Self::new(satd, nonsatd)
    }

    pub fn map(&self, raw: &str) -> Option<Label> {
        let raw = raw.trim();
        if self.satd.contains(raw) {
            Some(Label::Satd)
        } else if self.nonsatd.contains(raw) {
            Some(Label::NonSatd)
        } else {
            None
        }
    }
}

impl Default for LabelMapping {
    fn default() -> Self {
        LabelMapping::new(["positive", "SATD", "1"], ["negative", "WITHOUT_CLASSIFICATION", "0"])
            .expect("default mapping is valid")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    project: String,
    id: u64,
    text: String,
    kind: CommentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start_line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end_line: Option<usize>,
}

impl From<&Comment> for Record {
    fn from(c: &Comment) -> Self {
        Record {
            project: c.project.clone(),
            id: c.id,
            text: c.text.clone(),
            kind: c.kind,
            label: c.gold_label.map(|l| l.as_str().to_string()),
            file: c.origin.as_ref().map(|o| o.file.clone()),
            start_line: c.origin.as_ref().map(|o| o.start_line),
            end_line: c.origin.as_ref().map(|o| o.end_line),
        }
    }
}

fn parse_label(raw: &str) -> Option<Label> {
    match raw {
        "SATD" => Some(Label::Satd),
        "NonSATD" => Some(Label::NonSatd),
        other => LabelMapping::default().map(other),
    }
}

/// Parses JSON-Lines corpus content. `path` is used for error messages.
pub fn parse_corpus(name: impl Into<String>, path: &Path, content: impl BufRead) -> Result<Corpus> {
    let mut comments = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
            path: path.to_path_buf(),
            line: lineno,
            message: e.to_string(),
        })?;
        let gold_label = match record.label.as_deref() {
            None => None,
            Some(raw) => Some(parse_label(raw).ok_or_else(|| Error::UnknownLabel {
                path: path.to_path_buf(),
                line: lineno,
                label: raw.to_string(),
            })?),
        };
        let origin = match (record.file, record.start_line, record.end_line) {
            (Some(file), Some(start_line), end_line) => {
                Some(Origin { file, start_line, end_line: end_line.unwrap_or(start_line) })
            }
            (None, None, None) => None,
            _ => {
                return Err(Error::MalformedRecord {
                    path: path.to_path_buf(),
                    line: lineno,
                    message: "origin needs both `file` and `start_line`".into(),
                })
            }
        };
        if record.text.trim().is_empty() {
            return Err(Error::MalformedRecord {
                path: path.to_path_buf(),
                line: lineno,
                message: "comment text is blank".into(),
            });
        }
        comments.push(Comment {
            project: record.project,
            id: record.id,
            text: record.text,
            kind: record.kind,
            origin,
            gold_label,
        });
    }
    Corpus::new(name, comments)
}

/// Reads a JSON-Lines corpus file. The corpus is named after the file stem.
pub fn read_corpus(path: &Path) -> Result<Corpus> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_corpus(name, path, BufReader::new(file))
}

/// Serializes a corpus as JSON Lines into any writer.
pub fn write_corpus_to(corpus: &Corpus, mut out: impl Write) -> std::io::Result<()> {
    for comment in corpus.comments() {
        serde_json::to_writer(&mut out, &Record::from(comment))?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn write_corpus(corpus: &Corpus, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_corpus_to(corpus, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(content.lines().map(str::to_string).collect())
}

/// Pairs line k of `comments_path` with line k of `labels_path`. Ids are
/// 1-based file order; every comment belongs to project `project`.
pub fn import_benchmark(
    project: &str,
    comments_path: &Path,
    labels_path: &Path,
    mapping: &LabelMapping,
) -> Result<Corpus> {
    let texts = read_lines(comments_path)?;
    let labels = read_lines(labels_path)?;
    let projects = vec![project.to_string(); texts.len()];
    let comments = pair_records(&texts, &labels, &projects, labels_path, mapping)?;
    Corpus::new(project, comments)
}

/// Like [`import_benchmark`] with a third parallel file naming the project
/// of each line. Returns one corpus per project in first-appearance order,
/// with ids numbered 1..N within each project.
pub fn import_benchmark_projects(
    comments_path: &Path,
    labels_path: &Path,
    projects_path: &Path,
    mapping: &LabelMapping,
) -> Result<Vec<Corpus>> {
    let texts = read_lines(comments_path)?;
    let labels = read_lines(labels_path)?;
    let projects: Vec<String> = read_lines(projects_path)?.into_iter().map(|p| p.trim().to_string()).collect();
    if projects.len() != texts.len() {
        return Err(Error::InvalidInput(format!("{} project lines vs {} comment lines", projects.len(), texts.len())));
    }
    let comments = pair_records(&texts, &labels, &projects, labels_path, mapping)?;
    let all = Corpus::new("benchmark", comments)?;
    Ok(all.split_by_project())
}

fn pair_records(
    texts: &[String],
    labels: &[String],
    projects: &[String],
    labels_path: &Path,
    mapping: &LabelMapping,
) -> Result<Vec<Comment>> {
    if texts.len() != labels.len() {
        return Err(Error::LineCountMismatch { comments: texts.len(), labels: labels.len() });
    }
    let mut next_id: BTreeMap<&str, u64> = BTreeMap::new();
    texts
        .iter()
        .zip(labels)
        .zip(projects)
        .enumerate()
        .map(|(idx, ((text, raw), project))| {
            let label = mapping.map(raw).ok_or_else(|| Error::UnknownLabel {
                path: labels_path.to_path_buf(),
                line: idx + 1,
                label: raw.clone(),
            })?;
            let id = next_id.entry(project.as_str()).or_insert(0);
            *id += 1;
            Ok(Comment::new(project.clone(), *id, text.clone(), CommentKind::Line).with_label(label))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(content: &str) -> Result<Corpus> {
        parse_corpus("t", Path::new("t.jsonl"), Cursor::new(content))
    }

    #[test]
    fn three_unlabeled_records() {
        let corpus = parse(
            r#"{"project":"p","id":1,"text":"a","kind":"line"}
{"project":"p","id":2,"text":"b","kind":"block","extra":true}
{"project":"p","id":3,"text":"c","kind":"doc"}
"#,
        )
        .unwrap();
        assert_eq!(corpus.len(), 3);
        assert!(!corpus.is_labeled());
    }

    #[test]
    fn partial_labels_name_the_record() {
        let err = parse(
            r#"{"project":"p","id":1,"text":"a","kind":"line","label":"SATD"}
{"project":"p","id":2,"text":"b","kind":"line"}
{"project":"p","id":3,"text":"c","kind":"line","label":"NonSATD"}
"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("missing label"), "{msg}");
        assert!(msg.contains("\"p\"/2"), "{msg}");
    }

    #[test]
    fn malformed_record_reports_line() {
        let err = parse("{\"project\":\"p\",\"id\":1,\"text\":\"a\",\"kind\":\"line\"}\nnot json\n").unwrap_err();
        assert!(matches!(err, Error::MalformedRecord { line: 2, .. }), "{err}");
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = parse(
            r#"{"project":"p","id":1,"text":"a","kind":"line"}
{"project":"p","id":1,"text":"b","kind":"line"}
"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateId { id: 1, .. }));
    }

    #[test]
    fn same_id_in_different_projects_is_fine() {
        let corpus = parse(
            r#"{"project":"p","id":1,"text":"a","kind":"line"}
{"project":"q","id":1,"text":"b","kind":"line"}
"#,
        )
        .unwrap();
        assert_eq!(corpus.projects(), ["p", "q"]);
    }

    #[test]
    fn unknown_label_rejected() {
        let err = parse(r#"{"project":"p","id":1,"text":"a","kind":"line","label":"maybe"}"#).unwrap_err();
        assert!(matches!(err, Error::UnknownLabel { line: 1, .. }));
    }

    #[test]
    fn empty_corpus_round_trip() {
        let mut buf = Vec::new();
        write_corpus_to(&Corpus::empty("e"), &mut buf).unwrap();
        assert!(buf.is_empty());
        assert!(parse("").unwrap().is_empty());
    }

    #[test]
    fn embedded_newline_round_trips() {
        let comment = Comment::new("p", 7, "line one\nline \"two\"\t\\ end", CommentKind::Block)
            .with_label(Label::Satd)
            .with_origin(Origin { file: PathBuf::from("src/A.java"), start_line: 3, end_line: 4 });
        let corpus = Corpus::new("t", vec![comment]).unwrap();
        let mut buf = Vec::new();
        write_corpus_to(&corpus, &mut buf).unwrap();
        assert_eq!(buf.iter().filter(|&&b| b == b'\n').count(), 1);
        let back = parse_corpus("t", Path::new("t"), Cursor::new(buf)).unwrap();
        assert_eq!(back, corpus);
    }

    #[test]
    fn default_mapping() {
        let m = LabelMapping::default();
        assert_eq!(m.map("positive"), Some(Label::Satd));
        assert_eq!(m.map("WITHOUT_CLASSIFICATION"), Some(Label::NonSatd));
        assert_eq!(m.map(" 1 "), Some(Label::Satd));
        assert_eq!(m.map("DESIGN"), None);
    }

    #[test]
    fn overlapping_mapping_rejected() {
        assert!(LabelMapping::new(["x"], ["x", "y"]).is_err());
        assert!(LabelMapping::new(Vec::<String>::new(), ["y"]).is_err());
    }

    #[test]
    fn split_preserves_order() {
        let comments = vec![
            Comment::new("b", 1, "x", CommentKind::Line),
            Comment::new("a", 1, "y", CommentKind::Line),
            Comment::new("b", 2, "z", CommentKind::Line),
        ];
        let parts = Corpus::new("all", comments).unwrap().split_by_project();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].name(), "b");
        assert_eq!(parts[0].comments()[1].text, "z");
        assert_eq!(parts[1].name(), "a");
    }
}

//! Unsupervised classifiers: MAT (strict or fuzzy tag matching), MAT with
//! project-specific tags, and the keyword/phrase Pattern baseline.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{self, KeyValues};
use crate::corpus::{Comment, Corpus, Label};
use crate::error::{Error, Result};
use crate::exec;
use crate::textprep::{preprocess, stem, tokenize};

/// The four representative task tags.
pub const DEFAULT_TAGS: [&str; 4] = ["todo", "fixme", "xxx", "hack"];

const BUNDLED_PATTERNS: &str = include_str!("../data/patterns.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchStrategy {
    Strict,
    #[default]
    Fuzzy,
}

impl std::str::FromStr for MatchStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(MatchStrategy::Strict),
            "fuzzy" => Ok(MatchStrategy::Fuzzy),
            other => Err(Error::InvalidInput(format!("unknown match strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TagSource {
    Default,
    Extended,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tag {
    /// Lowercased tag as written, e.g. `fixme`.
    pub name: String,
    /// The tag passed through the stemmer; this is what tokens are matched against.
    pub stemmed: String,
}

impl Tag {
    pub fn new(raw: &str) -> Result<Self> {
        let name = raw.trim().to_ascii_lowercase();
        if name.len() < 2 || !name.bytes().all(|b| b.is_ascii_lowercase()) {
            return Err(Error::InvalidTag(raw.to_string()));
        }
        let stemmed = stem(&name);
        Ok(Tag { name, stemmed })
    }
}

/// Ordered, duplicate-free set of task tags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagSet {
    tags: Vec<Tag>,
    source: TagSource,
}

impl TagSet {
    /// A tag set replacing the defaults entirely.
    pub fn new<I, S>(tags: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = TagSet { tags: Vec::new(), source: TagSource::Extended };
        for raw in tags {
            set.push(Tag::new(raw.as_ref())?);
        }
        if set.tags.is_empty() {
            return Err(Error::InvalidInput("tag set is empty".into()));
        }
        Ok(set)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::new(config::read_list(path)?)
    }

    fn push(&mut self, tag: Tag) {
        if !self.tags.iter().any(|t| t.name == tag.name) {
            self.tags.push(tag);
        }
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.tags.iter().map(|t| t.name.as_str())
    }

    pub fn source(&self) -> TagSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.tags.iter().any(|t| t.name == name)
    }

    pub fn is_subset_of(&self, other: &TagSet) -> bool {
        self.tags.iter().all(|t| other.contains(&t.name))
    }
}

impl Default for TagSet {
    fn default() -> Self {
        TagSet {
            tags: DEFAULT_TAGS.iter().map(|t| Tag::new(t).expect("valid default tag")).collect(),
            source: TagSource::Default,
        }
    }
}

/// Adds project-specific tags to `base`. Tags are lowercased; anything other
/// than letters is rejected.
pub fn extend_tags<S: AsRef<str>>(base: &TagSet, project_tags: &[S]) -> Result<TagSet> {
    let mut extended = base.clone();
    for raw in project_tags {
        extended.push(Tag::new(raw.as_ref())?);
    }
    if !project_tags.is_empty() {
        extended.source = TagSource::Extended;
    }
    Ok(extended)
}

/// `strict`: equality. `fuzzy`: the tag is a prefix or a suffix of the token.
pub fn match_tag(token: &str, tag: &str, strategy: MatchStrategy) -> bool {
    match strategy {
        MatchStrategy::Strict => token == tag,
        MatchStrategy::Fuzzy => token.starts_with(tag) || token.ends_with(tag),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Evidence {
    /// A task tag matched a stemmed token.
    Tag { tag: String, token: String },
    /// A pattern (single word or phrase) matched.
    Pattern { pattern: String },
    /// Supervised vote count.
    Model { votes: usize, models: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub project: String,
    pub id: u64,
    pub label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
}

impl Prediction {
    pub fn new(comment: &Comment, label: Label, evidence: Option<Evidence>) -> Self {
        Prediction { project: comment.project.clone(), id: comment.id, label, evidence }
    }
}

/// First `(tag, token)` match in token order, then tag order.
pub fn find_tag<'a>(tokens: &'a [String], tags: &'a TagSet, strategy: MatchStrategy) -> Option<(&'a Tag, &'a str)> {
    tokens.iter().find_map(|token| {
        tags.tags.iter().find(|tag| match_tag(token, &tag.stemmed, strategy)).map(|tag| (tag, token.as_str()))
    })
}

pub fn classify_mat(comment: &Comment, tags: &TagSet, strategy: MatchStrategy) -> Prediction {
    let tokens = preprocess(&comment.text);
    match find_tag(tokens.as_slice(), tags, strategy) {
        Some((tag, token)) => Prediction::new(
            comment,
            Label::Satd,
            Some(Evidence::Tag { tag: tag.name.clone(), token: token.to_string() }),
        ),
        None => Prediction::new(comment, Label::NonSatd, None),
    }
}

/// A keyword or phrase pattern, stored both as written and as stemmed tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub text: String,
    stems: Vec<String>,
}

impl Pattern {
    pub fn new(raw: &str) -> Result<Self> {
        let text = tokenize(raw).into_vec().join(" ");
        let stems = preprocess(raw).into_vec();
        if stems.is_empty() {
            return Err(Error::InvalidInput(format!("pattern {raw:?} has no letters")));
        }
        Ok(Pattern { text, stems })
    }

    fn occurs_in(&self, tokens: &[String]) -> bool {
        tokens.windows(self.stems.len()).any(|w| w == self.stems.as_slice())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<Pattern>,
}

impl PatternSet {
    pub fn new<I, S>(patterns: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out: Vec<Pattern> = Vec::new();
        for raw in patterns {
            let pattern = Pattern::new(raw.as_ref())?;
            if !out.iter().any(|p| p.text == pattern.text) {
                out.push(pattern);
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyPatternSet);
        }
        Ok(PatternSet { patterns: out })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::new(config::read_list(path)?)
    }

    /// The bundled keyword/phrase list.
    pub fn bundled() -> Self {
        Self::new(config::parse_list(BUNDLED_PATTERNS)).expect("bundled patterns are valid")
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// SATD iff some pattern occurs as a contiguous run of stemmed tokens.
pub fn classify_pattern(comment: &Comment, patterns: &PatternSet) -> Prediction {
    let tokens = preprocess(&comment.text);
    match patterns.patterns.iter().find(|p| p.occurs_in(tokens.as_slice())) {
        Some(p) => Prediction::new(comment, Label::Satd, Some(Evidence::Pattern { pattern: p.text.clone() })),
        None => Prediction::new(comment, Label::NonSatd, None),
    }
}

/// A fully configured unsupervised classifier.
#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Mat { tags: TagSet, strategy: MatchStrategy },
    Pattern(PatternSet),
}

impl Classifier {
    pub fn mat_strict() -> Self {
        Classifier::Mat { tags: TagSet::default(), strategy: MatchStrategy::Strict }
    }

    pub fn mat_fuzzy() -> Self {
        Classifier::Mat { tags: TagSet::default(), strategy: MatchStrategy::Fuzzy }
    }

    pub fn classify(&self, comment: &Comment) -> Prediction {
        match self {
            Classifier::Mat { tags, strategy } => classify_mat(comment, tags, *strategy),
            Classifier::Pattern(patterns) => classify_pattern(comment, patterns),
        }
    }
}

/// One prediction per comment, in corpus order.
pub fn classify_corpus(corpus: &Corpus, classifier: &Classifier) -> Vec<Prediction> {
    exec::map(corpus.comments(), |c| classifier.classify(c))
}

pub fn classify_corpus_with(execution: exec::Execution, corpus: &Corpus, classifier: &Classifier) -> Vec<Prediction> {
    exec::map_with(execution, corpus.comments(), |c| classifier.classify(c))
}

/// Extra tags per project, keyed by lowercased project name.
pub type ProjectTags = BTreeMap<String, Vec<String>>;

const BUNDLED_PROJECT_TAGS: &str = include_str!("../data/project_tags.txt");

pub fn parse_project_tags(kv: &KeyValues) -> Result<ProjectTags> {
    let mut out = ProjectTags::new();
    for entry in &kv.entries {
        let tags = entry.list();
        for tag in &tags {
            Tag::new(tag).map_err(|e| kv.error(entry, e.to_string()))?;
        }
        out.entry(entry.key.clone()).or_default().extend(tags);
    }
    Ok(out)
}

/// `project = tag, tag` lines.
pub fn read_project_tags(path: &Path) -> Result<ProjectTags> {
    parse_project_tags(&KeyValues::read(path)?)
}

/// The per-project tags observed in the benchmark projects.
pub fn bundled_project_tags() -> ProjectTags {
    let kv = KeyValues::parse("project_tags.txt", BUNDLED_PROJECT_TAGS).expect("bundled file parses");
    parse_project_tags(&kv).expect("bundled tags are valid")
}

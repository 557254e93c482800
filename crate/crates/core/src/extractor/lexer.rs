use std::path::Path;

use crate::config::KeyValues;
use crate::corpus::{Comment, CommentKind, Origin};
use crate::error::Result;

/// Comment and literal syntax for one family of languages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageProfile {
    pub line_prefixes: Vec<String>,
    pub block_delimiters: Vec<(String, String)>,
    /// Block delimiters whose comments count as documentation comments.
    /// When an opener is a prefix of another, the longest match wins.
    pub doc_delimiters: Vec<(String, String)>,
    /// Single-character string/char literal quotes.
    pub string_quotes: Vec<char>,
    /// Multi-line literal delimiter such as `"""`.
    pub text_block: Option<String>,
    pub escape: char,
    /// File extensions (without the dot) this profile applies to.
    pub extensions: Vec<String>,
}

impl LanguageProfile {
    pub fn java() -> Self {
        LanguageProfile {
            line_prefixes: vec!["//".into()],
            block_delimiters: vec![("/*".into(), "*/".into())],
            doc_delimiters: vec![("/**".into(), "*/".into())],
            string_quotes: vec!['"', '\''],
            text_block: Some("\"\"\"".into()),
            escape: '\\',
            extensions: vec!["java".into()],
        }
    }

    /// Applies `line_prefixes`, `block_delimiters`, `doc_delimiters`,
    /// `string_quotes`, `text_block` and `extensions` keys over the Java
    /// defaults. Delimiter pairs are written `open close`, comma-separated.
    pub fn apply(&mut self, kv: &KeyValues) -> Result<()> {
        for entry in &kv.entries {
            match entry.key.as_str() {
                "line_prefixes" => self.line_prefixes = entry.list(),
                "block_delimiters" | "doc_delimiters" => {
                    let mut pairs = Vec::new();
                    for item in entry.list() {
                        let mut parts = item.split_whitespace();
                        match (parts.next(), parts.next(), parts.next()) {
                            (Some(open), Some(close), None) => pairs.push((open.to_string(), close.to_string())),
                            _ => return Err(kv.error(entry, format!("expected `open close`, found {item:?}"))),
                        }
                    }
                    if entry.key == "block_delimiters" {
                        self.block_delimiters = pairs;
                    } else {
                        self.doc_delimiters = pairs;
                    }
                }
                "string_quotes" => {
                    let mut quotes = Vec::new();
                    for item in entry.list() {
                        let mut chars = item.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) => quotes.push(c),
                            _ => return Err(kv.error(entry, format!("quote {item:?} must be one character"))),
                        }
                    }
                    self.string_quotes = quotes;
                }
                "text_block" => {
                    let v = entry.value.trim();
                    self.text_block = (!v.is_empty()).then(|| v.to_string());
                }
                "extensions" => {
                    self.extensions = entry.list().into_iter().map(|e| e.trim_start_matches('.').to_string()).collect()
                }
                _ => {}
            }
        }
        if self
            .line_prefixes
            .iter()
            .chain(self.block_delimiters.iter().chain(&self.doc_delimiters).flat_map(|(o, c)| [o, c]))
            .any(|d| d.is_empty())
        {
            return Err(crate::error::Error::InvalidInput("comment delimiters must be non-empty".into()));
        }
        Ok(())
    }

    pub fn matches_path(&self, path: &Path) -> bool {
        path.extension()
            .and_then(|e| e.to_str())
            .is_some_and(|ext| self.extensions.iter().any(|x| x.eq_ignore_ascii_case(ext)))
    }
}

impl Default for LanguageProfile {
    fn default() -> Self {
        Self::java()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub file: std::path::PathBuf,
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extraction {
    pub comments: Vec<Comment>,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, Copy)]
enum Opener<'a> {
    Line(&'a str),
    Block { open: &'a str, close: &'a str, kind: CommentKind },
}

impl Opener<'_> {
    fn open_len(&self) -> usize {
        match self {
            Opener::Line(p) => p.len(),
            Opener::Block { open, .. } => open.len(),
        }
    }
}

/// Lexes comments out of `source`. Comments inside string, char and text
/// block literals are ignored. Returned comments carry their 1-based line
/// range and a per-file id starting at 1; the project is left empty for the
/// caller to assign. Comments whose body is blank are skipped.
pub fn extract_comments(source: &str, profile: &LanguageProfile, path: &Path) -> Extraction {
    let mut openers: Vec<Opener> = profile
        .line_prefixes
        .iter()
        .map(|p| Opener::Line(p))
        .chain(profile.doc_delimiters.iter().map(|(o, c)| Opener::Block { open: o, close: c, kind: CommentKind::Doc }))
        .chain(profile.block_delimiters.iter().map(|(o, c)| Opener::Block {
            open: o,
            close: c,
            kind: CommentKind::Block,
        }))
        .collect();
    // longest opener first; doc before block on equal length
    openers.sort_by_key(|o| std::cmp::Reverse(o.open_len()));

    let bytes = source.as_bytes();
    let mut out = Extraction::default();
    let mut pos = 0;
    let mut line = 1;
    let mut next_id = 1;

    let advance = |from: usize, to: usize, line: &mut usize| {
        *line += bytes[from..to].iter().filter(|&&b| b == b'\n').count();
    };

    while pos < bytes.len() {
        let rest = &source[pos..];

        if let Some(tb) = profile.text_block.as_deref().filter(|tb| rest.starts_with(tb)) {
            let end =
                find_unescaped(source, pos + tb.len(), tb, profile.escape, false).map_or(bytes.len(), |i| i + tb.len());
            advance(pos, end, &mut line);
            pos = end;
            continue;
        }

        let ch = rest.chars().next().expect("non-empty");
        if profile.string_quotes.contains(&ch) {
            let quote = &rest[..ch.len_utf8()];
            let end = find_unescaped(source, pos + quote.len(), quote, profile.escape, true)
                .map_or(bytes.len(), |i| i + quote.len());
            advance(pos, end, &mut line);
            pos = end;
            continue;
        }

        let opener = openers.iter().copied().find(|op| match op {
            Opener::Line(p) => rest.starts_with(p),
            Opener::Block { open, kind, .. } => {
                rest.starts_with(open)
                    // `/**/` is an empty block comment, not the start of a doc comment
                    && !(*kind == CommentKind::Doc
                        && profile.block_delimiters.iter().any(|(bo, bc)| rest.starts_with(&format!("{bo}{bc}"))))
            }
        });

        let Some(opener) = opener else {
            pos += ch.len_utf8();
            if ch == '\n' {
                line += 1;
            }
            continue;
        };

        let start_line = line;
        let (body, kind, end) = match opener {
            Opener::Line(prefix) => {
                let body_start = pos + prefix.len();
                let end = source[body_start..].find('\n').map_or(bytes.len(), |i| body_start + i);
                (&source[body_start..end], CommentKind::Line, end)
            }
            Opener::Block { open, close, kind } => {
                let body_start = pos + open.len();
                match source[body_start..].find(close) {
                    Some(i) => (&source[body_start..body_start + i], kind, body_start + i + close.len()),
                    None => {
                        out.warnings.push(Warning {
                            file: path.to_path_buf(),
                            line: start_line,
                            message: format!("unterminated comment opened with {open:?}; taken to end of file"),
                        });
                        (&source[body_start..], kind, bytes.len())
                    }
                }
            }
        };
        advance(pos, end, &mut line);
        let end_line = line;
        pos = end;

        let text = body.trim();
        if text.is_empty() {
            continue;
        }
        out.comments.push(Comment::new(String::new(), next_id, text, kind).with_origin(Origin {
            file: path.to_path_buf(),
            start_line,
            end_line,
        }));
        next_id += 1;
    }
    out
}

/// Position of the next unescaped `delim` at or after `from`. With
/// `stop_at_newline`, an unterminated literal ends at the line break.
fn find_unescaped(source: &str, from: usize, delim: &str, escape: char, stop_at_newline: bool) -> Option<usize> {
    let mut iter = source[from..].char_indices();
    while let Some((i, c)) = iter.next() {
        if c == escape {
            iter.next();
        } else if stop_at_newline && c == '\n' {
            return Some(from + i - delim.len());
        } else if source[from + i..].starts_with(delim) {
            return Some(from + i);
        }
    }
    None
}

/// Merges maximal runs of line comments on consecutive lines of the same
/// file into one comment (texts joined with `\n`). Other kinds pass through.
pub fn group_consecutive(comments: Vec<Comment>) -> Vec<Comment> {
    let mut out: Vec<Comment> = Vec::with_capacity(comments.len());
    for comment in comments {
        if let Some(prev) = out.last_mut() {
            let adjacent = match (&prev.origin, &comment.origin) {
                (Some(a), Some(b)) => a.file == b.file && b.start_line == a.end_line + 1,
                _ => false,
            };
            if adjacent && prev.kind == CommentKind::Line && comment.kind == CommentKind::Line {
                prev.text.push('\n');
                prev.text.push_str(&comment.text);
                if let (Some(a), Some(b)) = (prev.origin.as_mut(), comment.origin.as_ref()) {
                    a.end_line = b.end_line;
                }
                continue;
            }
        }
        out.push(comment);
    }
    out
}

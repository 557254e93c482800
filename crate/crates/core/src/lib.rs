//! Identification of self-admitted technical debt (SATD) in source-code
//! comments.
//!
//! The primary classifier is MAT: a comment is SATD when one of the task tags
//! `todo`, `fixme`, `xxx` or `hack` occurs at the start or end of one of its
//! stemmed tokens. Around it sit a keyword/phrase [`matchers::PatternSet`]
//! baseline, a supervised text-mining comparator ([`tm`]), comment extraction
//! from source files ([`extractor`]) and an evaluation harness ([`eval`]).
//!
//! ```
//! use satd_core::corpus::{Comment, CommentKind, Label};
//! use satd_core::matchers::{classify_mat, MatchStrategy, TagSet};
//!
//! let comment = Comment::new("demo", 1, "pleasefixme: leaks on close", CommentKind::Line);
//! let prediction = classify_mat(&comment, &TagSet::default(), MatchStrategy::Fuzzy);
//! assert_eq!(prediction.label, Label::Satd);
//! ```

pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod exec;
pub mod extractor;
pub mod matchers;
pub mod textprep;
pub mod tm;

pub use error::{Error, Result};

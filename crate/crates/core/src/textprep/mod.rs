//! Comment text preprocessing: tokenization, stemming and stop-word removal.

mod porter;

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{Error, Result};

/// Lowercase alphabetic tokens in order of appearance.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenList(Vec<String>);

impl TokenList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<String> {
        self.0
    }
}

impl FromIterator<String> for TokenList {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        TokenList(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TokenList {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl PartialEq<[&str]> for TokenList {
    fn eq(&self, other: &[&str]) -> bool {
        self.0.len() == other.len() && self.0.iter().zip(other).all(|(a, b)| a == b)
    }
}

impl<const N: usize> PartialEq<[&str; N]> for TokenList {
    fn eq(&self, other: &[&str; N]) -> bool {
        self == &other[..]
    }
}

/// Splits on every character that is not an ASCII letter and lowercases the
/// resulting runs. Non-ASCII letters count as separators.
pub fn tokenize(text: &str) -> TokenList {
    text.split(|c: char| !c.is_ascii_alphabetic()).filter(|run| !run.is_empty()).map(str::to_ascii_lowercase).collect()
}

/// Porter stem of a lowercase alphabetic token.
pub fn stem(token: &str) -> String {
    porter::stem(token)
}

/// `tokenize` followed by `stem` on every token.
pub fn preprocess(text: &str) -> TokenList {
    tokenize(text).iter().map(|t| stem(t)).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct StopWordSet {
    words: BTreeSet<String>,
}

const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

impl StopWordSet {
    pub fn new<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for word in words {
            let word = word.as_ref().trim();
            if word.is_empty() || !word.bytes().all(|b| b.is_ascii_lowercase()) {
                return Err(Error::InvalidInput(format!("stop word {word:?} must be lowercase a-z")));
            }
            set.insert(word.to_string());
        }
        Ok(StopWordSet { words: set })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The bundled English list.
    pub fn english() -> Self {
        Self::new(config::parse_list(DEFAULT_STOPWORDS)).expect("bundled stop list is valid")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::new(config::read_list(path)?)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

impl TryFrom<Vec<String>> for StopWordSet {
    type Error = Error;

    fn try_from(words: Vec<String>) -> Result<Self> {
        Self::new(words)
    }
}

impl From<StopWordSet> for Vec<String> {
    fn from(set: StopWordSet) -> Self {
        set.words.into_iter().collect()
    }
}

pub fn remove_stopwords(tokens: &TokenList, stops: &StopWordSet) -> TokenList {
    tokens.iter().filter(|t| !stops.contains(t)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("TODO: Fully implement this!"), ["todo", "fully", "implement", "this"]);
        assert_eq!(tokenize("TO DO : delete the file"), ["to", "do", "delete", "the", "file"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("naïve x2y __init__"), ["na", "ve", "x", "y", "init"]);
    }

    #[test]
    fn stem_examples() {
        assert_eq!(stem("hacks"), "hack");
        assert_eq!(stem("todo"), "todo");
        assert_eq!(stem("fixes"), "fix");
    }

    #[test]
    fn tag_words_under_porter() {
        assert_eq!(stem("todo"), "todo");
        assert_eq!(stem("xxx"), "xxx");
        assert_eq!(stem("hack"), "hack");
        // not a fixed point: the final e is stripped, so tags are stemmed too
        assert_eq!(stem("fixme"), "fixm");
        for tag in ["todo", "fixme", "xxx", "hack"] {
            let once = stem(tag);
            assert_eq!(stem(&once), once, "{tag}");
        }
    }

    #[test]
    fn preprocess_examples() {
        assert_eq!(preprocess("FIXME: not very efficient"), ["fixm", "not", "veri", "effici"]);
        assert_eq!(preprocess("HACK: force the controller").as_slice()[0], "hack");
        assert!(preprocess("").is_empty());
    }

    #[test]
    fn stopword_removal() {
        let stops = StopWordSet::new(["the"]).unwrap();
        let tokens: TokenList = ["todo", "the", "fix"].map(String::from).into_iter().collect();
        assert_eq!(remove_stopwords(&tokens, &stops), ["todo", "fix"]);
        assert!(remove_stopwords(&TokenList::new(), &stops).is_empty());
        let both = StopWordSet::new(["the", "a"]).unwrap();
        let tokens: TokenList = ["the", "a"].map(String::from).into_iter().collect();
        assert!(remove_stopwords(&tokens, &both).is_empty());
        assert_eq!(remove_stopwords(&tokens, &StopWordSet::empty()), tokens);
    }

    #[test]
    fn bundled_stop_list() {
        let stops = StopWordSet::english();
        assert!(stops.len() >= 100);
        assert!(stops.contains("the"));
        assert!(!stops.contains("todo"));
    }

    #[test]
    fn stop_words_must_be_lowercase() {
        assert!(StopWordSet::new(["The"]).is_err());
    }
}

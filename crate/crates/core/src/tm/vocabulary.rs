use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Label};
use crate::error::{Error, Result};
use crate::textprep::StopWordSet;

use super::{tm_tokens, TermWeighting};

/// Selected features for one training corpus, ordered by descending
/// information gain (ties broken lexicographically), with the idf of each
/// feature over that corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVocabulary")]
pub struct FeatureVocabulary {
    pub features: Vec<String>,
    pub ig_scores: Vec<f64>,
    pub idf: Vec<f64>,
    pub selection_ratio: f64,
    /// Distinct candidate features before selection.
    pub candidates: usize,
    pub documents: usize,
    pub stopwords: StopWordSet,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

#[derive(Deserialize)]
struct RawVocabulary {
    features: Vec<String>,
    ig_scores: Vec<f64>,
    idf: Vec<f64>,
    selection_ratio: f64,
    candidates: usize,
    documents: usize,
    stopwords: StopWordSet,
}

impl TryFrom<RawVocabulary> for FeatureVocabulary {
    type Error = Error;

    fn try_from(raw: RawVocabulary) -> Result<Self> {
        let n = raw.features.len();
        if raw.ig_scores.len() != n || raw.idf.len() != n {
            return Err(Error::InvalidInput("vocabulary arrays differ in length".into()));
        }
        if raw.idf.iter().chain(&raw.ig_scores).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("vocabulary holds a non-finite value".into()));
        }
        let index = index_of(&raw.features)?;
        Ok(FeatureVocabulary {
            features: raw.features,
            ig_scores: raw.ig_scores,
            idf: raw.idf,
            selection_ratio: raw.selection_ratio,
            candidates: raw.candidates,
            documents: raw.documents,
            stopwords: raw.stopwords,
            index,
        })
    }
}

fn index_of(features: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(features.len());
    for (i, f) in features.iter().enumerate() {
        if index.insert(f.clone(), i).is_some() {
            return Err(Error::InvalidInput(format!("duplicate feature {f:?}")));
        }
    }
    Ok(index)
}

fn entropy(p: f64) -> f64 {
    [p, 1.0 - p].iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Information gain (bits) of a binary presence feature. `df` documents
/// contain the term, `df_pos` of them positive; `n` documents, `pos` positive.
pub fn information_gain(n: usize, pos: usize, df: usize, df_pos: usize) -> f64 {
    let nf = n as f64;
    let mut conditional = 0.0;
    for (count, count_pos) in [(df, df_pos), (n - df, pos - df_pos)] {
        if count > 0 {
            conditional += count as f64 / nf * entropy(count_pos as f64 / count as f64);
        }
    }
    (entropy(pos as f64 / nf) - conditional).max(0.0)
}

/// Smoothed idf: `ln((1 + n) / (1 + df)) + 1`.
pub fn idf(n: usize, df: usize) -> f64 {
    ((1.0 + n as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// Number of features kept out of `total` at `ratio`.
pub fn selected_count(total: usize, ratio: f64) -> usize {
    ((ratio * total as f64) - 1e-9).ceil().max(0.0) as usize
}

pub(crate) fn check_ratio(ratio: f64) -> Result<()> {
    if ratio > 0.0 && ratio <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("selection ratio {ratio} outside (0, 1]")))
    }
}

pub(crate) fn require_both_classes(corpus: &Corpus) -> Result<usize> {
    if !corpus.is_labeled() {
        return Err(Error::Unlabeled(corpus.name().to_string()));
    }
    let pos = corpus.satd_count();
    if corpus.is_empty() || pos == corpus.len() {
        return Err(Error::SingleClass { present: Label::Satd.as_str() });
    }
    if pos == 0 {
        return Err(Error::SingleClass { present: Label::NonSatd.as_str() });
    }
    Ok(pos)
}

/// Builds the vocabulary from a labeled corpus that contains both classes.
pub fn build_vocabulary(corpus: &Corpus, ratio: f64, stopwords: &StopWordSet) -> Result<FeatureVocabulary> {
    check_ratio(ratio)?;
    let pos = require_both_classes(corpus)?;
    let n = corpus.len();

    // term -> (df, df among SATD)
    let mut df: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for comment in corpus.comments() {
        let satd = comment.gold_label == Some(Label::Satd);
        let present: BTreeSet<String> = tm_tokens(&comment.text, stopwords).into_iter().collect();
        for term in present {
            let entry = df.entry(term).or_default();
            entry.0 += 1;
            entry.1 += usize::from(satd);
        }
    }

    let mut scored: Vec<(String, f64, usize)> = df
        .into_iter()
        .map(|(term, (d, dp))| {
            let ig = information_gain(n, pos, d, dp);
            (term, ig, d)
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let candidates = scored.len();
    scored.truncate(selected_count(candidates, ratio));

    let features: Vec<String> = scored.iter().map(|s| s.0.clone()).collect();
    let index = index_of(&features)?;
    Ok(FeatureVocabulary {
        ig_scores: scored.iter().map(|s| s.1).collect(),
        idf: scored.iter().map(|s| idf(n, s.2)).collect(),
        features,
        selection_ratio: ratio,
        candidates,
        documents: n,
        stopwords: stopwords.clone(),
        index,
    })
}

impl FeatureVocabulary {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn index_of(&self, feature: &str) -> Option<usize> {
        self.index.get(feature).copied()
    }

    /// Vector for already preprocessed tokens.
    pub fn vectorize_tokens(&self, tokens: &[String], weighting: TermWeighting) -> TfIdfVector {
        let mut tf: BTreeMap<usize, f64> = BTreeMap::new();
        for token in tokens {
            if let Some(i) = self.index_of(token) {
                *tf.entry(i).or_default() += 1.0;
            }
        }
        TfIdfVector {
            entries: tf
                .into_iter()
                .map(|(i, count)| match weighting {
                    TermWeighting::TfIdf => (i, count * self.idf[i]),
                    TermWeighting::Counts => (i, count),
                })
                .collect(),
        }
    }
}

/// Sparse feature weights, sorted by feature index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TfIdfVector {
    pub entries: Vec<(usize, f64)>,
}

impl TfIdfVector {
    pub fn get(&self, feature: usize) -> f64 {
        self.entries.binary_search_by_key(&feature, |e| e.0).map_or(0.0, |i| self.entries[i].1)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.1 == 0.0)
    }
}

/// tf-idf vector of `text` under `vocabulary`; tokens outside it are ignored.
pub fn vectorize(text: &str, vocabulary: &FeatureVocabulary) -> TfIdfVector {
    vocabulary.vectorize_tokens(&tm_tokens(text, &vocabulary.stopwords), TermWeighting::TfIdf)
}

//! Supervised text-mining comparator: information-gain feature selection,
//! tf-idf vectors and multinomial naive Bayes sub-models combined by vote.
//! Also the pipeline that lets MAT claim tagged comments before a
//! supervised model sees the rest.

mod ensemble;
mod nbm;
mod vocabulary;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Comment, Corpus};
use crate::error::Error;
use crate::exec;
use crate::matchers::{classify_mat, Classifier, MatchStrategy, Prediction, TagSet};
use crate::textprep::{remove_stopwords, stem, tokenize, StopWordSet};

pub use ensemble::{majority, predict_vote, train_ensemble, train_model, VotingEnsemble};
pub use nbm::{predict_nbm, train_nbm, NbmModel};
pub use vocabulary::{
    build_vocabulary, idf, information_gain, selected_count, vectorize, FeatureVocabulary, TfIdfVector,
};

/// What NBM accumulates per feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermWeighting {
    #[default]
    TfIdf,
    Counts,
}

impl FromStr for TermWeighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "tf-idf" | "tfidf" => Ok(TermWeighting::TfIdf),
            "counts" => Ok(TermWeighting::Counts),
            other => Err(Error::InvalidInput(format!("unknown term weighting {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TmConfig {
    pub ratio: f64,
    pub alpha: f64,
    pub weighting: TermWeighting,
    pub stopwords: StopWordSet,
}

impl Default for TmConfig {
    fn default() -> Self {
        TmConfig { ratio: 0.10, alpha: 1.0, weighting: TermWeighting::TfIdf, stopwords: StopWordSet::english() }
    }
}

/// Tokenize, drop stop words, then stem.
pub fn tm_tokens(text: &str, stopwords: &StopWordSet) -> Vec<String> {
    remove_stopwords(&tokenize(text), stopwords).iter().map(|t| stem(t)).collect()
}

/// Anything that labels a single comment.
pub trait CommentPredictor: Sync {
    fn predict(&self, comment: &Comment) -> Prediction;
}

impl CommentPredictor for Classifier {
    fn predict(&self, comment: &Comment) -> Prediction {
        self.classify(comment)
    }
}

pub fn predict_corpus(corpus: &Corpus, predictor: &dyn CommentPredictor) -> Vec<Prediction> {
    exec::map(corpus.comments(), |c| predictor.predict(c))
}

/// Fuzzy MAT first; comments without a tag get the supervised prediction.
pub fn combine_with_mat(corpus: &Corpus, tags: &TagSet, supervised: &dyn CommentPredictor) -> Vec<Prediction> {
    exec::map(corpus.comments(), |comment| {
        let mat = classify_mat(comment, tags, MatchStrategy::Fuzzy);
        if mat.label.is_satd() {
            mat
        } else {
            supervised.predict(comment)
        }
    })
}

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Comment, Corpus, Label};
use crate::error::{Error, Result};
use crate::exec;
use crate::matchers::{Evidence, Prediction};
use crate::textprep::StopWordSet;

use super::nbm::{train_nbm, NbmModel};
use super::vocabulary::build_vocabulary;
use super::{tm_tokens, CommentPredictor, TmConfig};

/// Sub-models that vote; SATD needs at least `threshold` votes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble")]
pub struct VotingEnsemble {
    sub_models: Vec<NbmModel>,
    threshold: usize,
}

#[derive(Deserialize)]
struct RawEnsemble {
    sub_models: Vec<NbmModel>,
    threshold: usize,
}

impl TryFrom<RawEnsemble> for VotingEnsemble {
    type Error = Error;

    fn try_from(raw: RawEnsemble) -> Result<Self> {
        VotingEnsemble::with_threshold(raw.sub_models, raw.threshold)
    }
}

/// Simple majority of `n` voters.
pub fn majority(n: usize) -> usize {
    n / 2 + 1
}

impl VotingEnsemble {
    /// Majority-vote ensemble.
    pub fn new(sub_models: Vec<NbmModel>) -> Result<Self> {
        let threshold = majority(sub_models.len());
        Self::with_threshold(sub_models, threshold)
    }

    pub fn with_threshold(sub_models: Vec<NbmModel>, threshold: usize) -> Result<Self> {
        if sub_models.is_empty() {
            return Err(Error::InvalidInput("ensemble needs at least one sub-model".into()));
        }
        if threshold == 0 || threshold > sub_models.len() {
            return Err(Error::InvalidInput(format!("vote threshold {threshold} outside 1..={}", sub_models.len())));
        }
        Ok(VotingEnsemble { sub_models, threshold })
    }

    pub fn sub_models(&self) -> &[NbmModel] {
        &self.sub_models
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    /// Number of sub-models voting SATD.
    pub fn votes(&self, text: &str) -> usize {
        let mut cache: Option<(&StopWordSet, Vec<String>)> = None;
        let mut votes = 0;
        for model in &self.sub_models {
            let stops = &model.vocabulary.stopwords;
            // sub-models usually share a stop list, so tokens are reused
            if cache.as_ref().is_none_or(|(s, _)| *s != stops) {
                cache = Some((stops, tm_tokens(text, stops)));
            }
            let (_, tokens) = cache.as_ref().expect("filled above");
            votes += usize::from(model.predict_tokens(tokens) == Label::Satd);
        }
        votes
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let json = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&json)
    }
}

impl CommentPredictor for VotingEnsemble {
    fn predict(&self, comment: &Comment) -> Prediction {
        predict_vote(self, comment)
    }
}

pub fn predict_vote(ensemble: &VotingEnsemble, comment: &Comment) -> Prediction {
    let votes = ensemble.votes(&comment.text);
    if votes >= ensemble.threshold {
        Prediction::new(comment, Label::Satd, Some(Evidence::Model { votes, models: ensemble.sub_models.len() }))
    } else {
        Prediction::new(comment, Label::NonSatd, None)
    }
}

/// Vocabulary plus NBM for one source corpus.
pub fn train_model(source: &Corpus, config: &TmConfig) -> Result<NbmModel> {
    let wrap = |e: Error| Error::Training { project: source.name().to_string(), source: Box::new(e) };
    let vocabulary = build_vocabulary(source, config.ratio, &config.stopwords).map_err(wrap)?;
    train_nbm(source, vocabulary, config.alpha, config.weighting).map_err(wrap)
}

/// One sub-model per source corpus, trained independently, majority vote.
pub fn train_ensemble(sources: &[Corpus], config: &TmConfig) -> Result<VotingEnsemble> {
    let models = exec::try_map(sources, |source| train_model(source, config))?;
    VotingEnsemble::new(models)
}

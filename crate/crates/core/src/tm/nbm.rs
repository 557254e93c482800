use serde::{Deserialize, Serialize};

use crate::corpus::{Comment, Corpus, Label};
use crate::error::{Error, Result};
use crate::matchers::{Evidence, Prediction};

use super::vocabulary::{require_both_classes, FeatureVocabulary, TfIdfVector};
use super::{tm_tokens, CommentPredictor, TermWeighting};

/// Multinomial naive Bayes over one project's vocabulary. Index 0 of each
/// per-class pair is SATD, index 1 NonSATD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbmModel {
    pub source: String,
    pub vocabulary: FeatureVocabulary,
    pub weighting: TermWeighting,
    pub alpha: f64,
    pub log_prior: [f64; 2],
    pub log_likelihood: [Vec<f64>; 2],
}

fn class_index(label: Label) -> usize {
    match label {
        Label::Satd => 0,
        Label::NonSatd => 1,
    }
}

/// Trains on every comment of `corpus`, which must be labeled and contain
/// both classes.
pub fn train_nbm(
    corpus: &Corpus,
    vocabulary: FeatureVocabulary,
    alpha: f64,
    weighting: TermWeighting,
) -> Result<NbmModel> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!("smoothing alpha must be positive, got {alpha}")));
    }
    require_both_classes(corpus)?;
    let v = vocabulary.len();
    let mut docs = [0usize; 2];
    let mut sums = [vec![0.0; v], vec![0.0; v]];
    for comment in corpus.comments() {
        let c = class_index(comment.gold_label.expect("labeled corpus"));
        docs[c] += 1;
        let vector = vocabulary.vectorize_tokens(&tm_tokens(&comment.text, &vocabulary.stopwords), weighting);
        for (i, w) in vector.entries {
            sums[c][i] += w;
        }
    }
    let n = corpus.len() as f64;
    let log_prior = [(docs[0] as f64 / n).ln(), (docs[1] as f64 / n).ln()];
    let log_likelihood = sums.map(|class_sums| {
        let denom = class_sums.iter().sum::<f64>() + alpha * v as f64;
        class_sums.iter().map(|s| ((s + alpha) / denom).ln()).collect()
    });
    Ok(NbmModel { source: corpus.name().to_string(), vocabulary, weighting, alpha, log_prior, log_likelihood })
}

impl NbmModel {
    /// Unnormalized log posteriors `[SATD, NonSATD]`.
    pub fn log_scores(&self, vector: &TfIdfVector) -> [f64; 2] {
        let mut scores = self.log_prior;
        for &(i, w) in &vector.entries {
            scores[0] += w * self.log_likelihood[0][i];
            scores[1] += w * self.log_likelihood[1][i];
        }
        scores
    }

    /// Posterior probability of SATD.
    pub fn posterior_satd(&self, vector: &TfIdfVector) -> f64 {
        let [s, n] = self.log_scores(vector);
        1.0 / (1.0 + (n - s).exp())
    }

    /// Label for preprocessed tokens; exact ties go to NonSATD.
    pub fn predict_tokens(&self, tokens: &[String]) -> Label {
        let [s, n] = self.log_scores(&self.vocabulary.vectorize_tokens(tokens, self.weighting));
        if s > n {
            Label::Satd
        } else {
            Label::NonSatd
        }
    }

    pub fn predict_label(&self, text: &str) -> Label {
        self.predict_tokens(&tm_tokens(text, &self.vocabulary.stopwords))
    }
}

impl CommentPredictor for NbmModel {
    fn predict(&self, comment: &Comment) -> Prediction {
        let label = self.predict_label(&comment.text);
        let evidence = label.is_satd().then_some(Evidence::Model { votes: 1, models: 1 });
        Prediction::new(comment, label, evidence)
    }
}

pub fn predict_nbm(model: &NbmModel, comment: &Comment) -> Prediction {
    model.predict(comment)
}

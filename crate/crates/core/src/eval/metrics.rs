use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Label};
use crate::error::{Error, Result};
use crate::matchers::Prediction;

/// SATD is the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn record(&mut self, predicted: Label, gold: Label) {
        match (predicted, gold) {
            (Label::Satd, Label::Satd) => self.tp += 1,
            (Label::Satd, Label::NonSatd) => self.fp += 1,
            (Label::NonSatd, Label::NonSatd) => self.tn += 1,
            (Label::NonSatd, Label::Satd) => self.fn_ += 1,
        }
    }
}

impl std::ops::Add for ConfusionMatrix {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        ConfusionMatrix { tp: self.tp + o.tp, fp: self.fp + o.fp, tn: self.tn + o.tn, fn_: self.fn_ + o.fn_ }
    }
}

/// Checks that `predictions` line up one-to-one with `corpus` in order.
pub fn check_alignment(predictions: &[Prediction], corpus: &Corpus) -> Result<()> {
    if predictions.len() != corpus.len() {
        return Err(Error::Misaligned(format!(
            "{} predictions for {} comments in {}",
            predictions.len(),
            corpus.len(),
            corpus.name()
        )));
    }
    for (p, c) in predictions.iter().zip(corpus.comments()) {
        if (p.project.as_str(), p.id) != c.key() {
            return Err(Error::Misaligned(format!(
                "prediction for {}#{} where comment {}#{} was expected",
                p.project, p.id, c.project, c.id
            )));
        }
    }
    Ok(())
}

pub fn confusion(predictions: &[Prediction], corpus: &Corpus) -> Result<ConfusionMatrix> {
    if !corpus.is_labeled() {
        return Err(Error::Unlabeled(corpus.name().to_string()));
    }
    check_alignment(predictions, corpus)?;
    let mut m = ConfusionMatrix::default();
    for (p, c) in predictions.iter().zip(corpus.comments()) {
        m.record(p.label, c.gold_label.expect("labeled corpus"));
    }
    Ok(m)
}

/// Precision, recall and F1; `None` where a denominator is zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Indicator {
    Precision,
    Recall,
    F1,
}

impl Indicator {
    pub const ALL: [Indicator; 3] = [Indicator::Precision, Indicator::Recall, Indicator::F1];

    pub fn as_str(self) -> &'static str {
        match self {
            Indicator::Precision => "precision",
            Indicator::Recall => "recall",
            Indicator::F1 => "f1",
        }
    }
}

impl std::str::FromStr for Indicator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "precision" | "p" => Ok(Indicator::Precision),
            "recall" | "r" => Ok(Indicator::Recall),
            "f1" | "f" | "f-measure" => Ok(Indicator::F1),
            other => Err(Error::InvalidInput(format!("unknown indicator {other:?}"))),
        }
    }
}

impl std::fmt::Display for Indicator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Scores {
    pub fn new(precision: Option<f64>, recall: Option<f64>) -> Self {
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            (Some(_), Some(_)) => Some(0.0),
            _ => None,
        };
        Scores { precision, recall, f1 }
    }

    pub fn get(&self, indicator: Indicator) -> Option<f64> {
        match indicator {
            Indicator::Precision => self.precision,
            Indicator::Recall => self.recall,
            Indicator::F1 => self.f1,
        }
    }
}

pub fn scores(m: &ConfusionMatrix) -> Scores {
    let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
    Scores::new(ratio(m.tp, m.tp + m.fp), ratio(m.tp, m.tp + m.fn_))
}

/// Arithmetic mean of the defined values, with the number of undefined ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Average {
    pub value: Option<f64>,
    pub skipped: usize,
}

pub fn macro_average<I: IntoIterator<Item = Option<f64>>>(values: I) -> Average {
    let mut sum = 0.0;
    let mut n = 0usize;
    let mut skipped = 0;
    for v in values {
        match v {
            Some(x) => {
                sum += x;
                n += 1;
            }
            None => skipped += 1,
        }
    }
    Average { value: (n > 0).then(|| sum / n as f64), skipped }
}

/// Macro averages of each indicator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AverageScores {
    pub precision: Average,
    pub recall: Average,
    pub f1: Average,
}

impl AverageScores {
    pub fn of<'a, I: IntoIterator<Item = &'a Scores> + Clone>(scores: I) -> Self {
        let avg = |ind: Indicator| macro_average(scores.clone().into_iter().map(|s| s.get(ind)));
        AverageScores { precision: avg(Indicator::Precision), recall: avg(Indicator::Recall), f1: avg(Indicator::F1) }
    }

    pub fn get(&self, indicator: Indicator) -> Average {
        match indicator {
            Indicator::Precision => self.precision,
            Indicator::Recall => self.recall,
            Indicator::F1 => self.f1,
        }
    }
}

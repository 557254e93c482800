use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Label};
use crate::error::{Error, Result};
use crate::matchers::Prediction;

use super::metrics::check_alignment;

/// One approach's predictions, aligned with the analysed corpus.
#[derive(Debug, Clone)]
pub struct ApproachPredictions {
    pub name: String,
    pub predictions: Vec<Prediction>,
}

/// Comments found by exactly the approaches in `members`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub members: Vec<String>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapCounts {
    /// Found by at least one approach.
    pub total: usize,
    /// Found by every approach.
    pub overlapped: usize,
    /// `overlapped / total`, undefined when nothing was found.
    pub overlap_ratio: Option<f64>,
    /// Found by this approach alone, in approach order.
    pub unique: Vec<usize>,
    /// Every non-empty region of the set diagram.
    pub regions: Vec<Region>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectOverlap {
    pub project: String,
    pub true_positives: OverlapCounts,
    pub true_negatives: OverlapCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub approaches: Vec<String>,
    pub projects: Vec<ProjectOverlap>,
    /// Sums over projects.
    pub total: ProjectOverlap,
}

fn counts(names: &[String], masks: &[u64]) -> OverlapCounts {
    let k = names.len();
    let full = (1u64 << k) - 1;
    let mut region = vec![0usize; 1 << k];
    for &m in masks {
        region[m as usize] += 1;
    }
    let total = masks.iter().filter(|&&m| m != 0).count();
    let overlapped = region[full as usize];
    OverlapCounts {
        total,
        overlapped,
        overlap_ratio: (total > 0).then(|| overlapped as f64 / total as f64),
        unique: (0..k).map(|i| region[1 << i]).collect(),
        regions: (1..=full as usize)
            .filter(|&m| region[m] > 0)
            .map(|m| Region {
                members: (0..k).filter(|i| m & (1 << i) != 0).map(|i| names[i].clone()).collect(),
                count: region[m],
            })
            .collect(),
    }
}

/// Set-diagram analysis of which approaches find each true positive and
/// true negative, per project and in total.
pub fn overlap_analysis(approaches: &[ApproachPredictions], corpus: &Corpus) -> Result<OverlapReport> {
    if approaches.len() < 2 {
        return Err(Error::InvalidInput("overlap analysis needs at least two approaches".into()));
    }
    if approaches.len() > 16 {
        return Err(Error::InvalidInput("overlap analysis supports at most 16 approaches".into()));
    }
    if !corpus.is_labeled() {
        return Err(Error::Unlabeled(corpus.name().to_string()));
    }
    for a in approaches {
        check_alignment(&a.predictions, corpus)?;
    }
    let names: Vec<String> = approaches.iter().map(|a| a.name.clone()).collect();

    let mut projects = Vec::new();
    let mut all_tp = Vec::new();
    let mut all_tn = Vec::new();
    for project in corpus.projects() {
        let mut tp = Vec::new();
        let mut tn = Vec::new();
        for (idx, comment) in corpus.comments().iter().enumerate() {
            if comment.project != project {
                continue;
            }
            let gold = comment.gold_label.expect("labeled corpus");
            let mask = approaches
                .iter()
                .enumerate()
                .filter(|(_, a)| a.predictions[idx].label == gold)
                .map(|(i, _)| 1u64 << i)
                .sum();
            match gold {
                Label::Satd => tp.push(mask),
                Label::NonSatd => tn.push(mask),
            }
        }
        projects.push(ProjectOverlap {
            project: project.to_string(),
            true_positives: counts(&names, &tp),
            true_negatives: counts(&names, &tn),
        });
        all_tp.extend(tp);
        all_tn.extend(tn);
    }
    let total = ProjectOverlap {
        project: "Total".into(),
        true_positives: counts(&names, &all_tp),
        true_negatives: counts(&names, &all_tn),
    };
    Ok(OverlapReport { approaches: names, projects, total })
}

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::metrics::{Indicator, Scores};
use super::scenario::Scenario;
use super::stats::{compare_samples, TestResult};

/// The ten benchmark projects in table order.
pub const BENCHMARK_PROJECTS: [&str; 10] =
    ["Ant", "ArgoUML", "Columba", "EMF", "Hibernate", "JEdit", "JFreeChart", "JMeter", "JRuby", "Squirrel"];

const BUNDLED_MTO: &str = include_str!("../../data/published_mto.csv");
const BUNDLED_OTO: &str = include_str!("../../data/published_oto.csv");

#[derive(Debug, Deserialize)]
struct Row {
    approach: String,
    project: String,
    indicator: String,
    value: f64,
}

/// Published per-project scores keyed by (approach, project, indicator).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PublishedScores {
    approaches: Vec<String>,
    cells: BTreeMap<(String, String, Indicator), f64>,
}

impl PublishedScores {
    pub fn parse(source: &Path, content: impl Read) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(content);
        let mut table = PublishedScores::default();
        for (i, row) in reader.deserialize::<Row>().enumerate() {
            let line = i + 2;
            let row =
                row.map_err(|e| Error::MalformedRecord { path: source.to_path_buf(), line, message: e.to_string() })?;
            let indicator = row.indicator.parse().map_err(|_| Error::MalformedRecord {
                path: source.to_path_buf(),
                line,
                message: format!("unknown indicator {:?}", row.indicator),
            })?;
            if !table.approaches.contains(&row.approach) {
                table.approaches.push(row.approach.clone());
            }
            table.cells.insert((row.approach, row.project, indicator), row.value);
        }
        Ok(table)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(path, file)
    }

    /// The transcribed tables shipped with the crate.
    pub fn bundled(scenario: Scenario) -> Self {
        let (name, content) = match scenario {
            Scenario::Mto => ("published_mto.csv", BUNDLED_MTO),
            Scenario::Oto => ("published_oto.csv", BUNDLED_OTO),
        };
        Self::parse(Path::new(name), content.as_bytes()).expect("bundled table is valid")
    }

    /// Approaches in order of first appearance.
    pub fn approaches(&self) -> &[String] {
        &self.approaches
    }

    /// Projects with a cell for `approach`, excluding the `Average` row:
    /// benchmark projects in their usual order, then any others by name.
    pub fn projects(&self, approach: &str) -> Vec<String> {
        let mut seen: Vec<String> = Vec::new();
        for (a, p, _) in self.cells.keys() {
            if a == approach && p != "Average" && !seen.contains(p) {
                seen.push(p.clone());
            }
        }
        let rank = |p: &String| BENCHMARK_PROJECTS.iter().position(|b| b == p).unwrap_or(usize::MAX);
        seen.sort_by(|x, y| rank(x).cmp(&rank(y)).then_with(|| x.cmp(y)));
        seen
    }

    pub fn get(&self, approach: &str, project: &str, indicator: Indicator) -> Result<f64> {
        self.cells.get(&(approach.to_string(), project.to_string(), indicator)).copied().ok_or_else(|| {
            Error::MissingPublishedCell {
                approach: approach.to_string(),
                project: project.to_string(),
                indicator: indicator.to_string(),
            }
        })
    }

    /// Per-project scores of one approach, as published (F1 included).
    pub fn scores_for<S: AsRef<str>>(&self, approach: &str, projects: &[S]) -> Result<Vec<(String, Scores)>> {
        projects
            .iter()
            .map(|p| {
                let p = p.as_ref();
                Ok((
                    p.to_string(),
                    Scores {
                        precision: Some(self.get(approach, p, Indicator::Precision)?),
                        recall: Some(self.get(approach, p, Indicator::Recall)?),
                        f1: Some(self.get(approach, p, Indicator::F1)?),
                    },
                ))
            })
            .collect()
    }
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// `(ours - other) / other`, undefined when either side is or `other` is 0.
pub fn improvement(ours: Option<f64>, other: Option<f64>) -> Option<f64> {
    match (ours, other) {
        (Some(a), Some(b)) if b != 0.0 => Some((a - b) / b),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproachComparison {
    pub approach: String,
    pub values: Vec<f64>,
    pub average: Option<f64>,
    /// Per project, as a fraction (0.5 = +50%).
    pub improvements: Vec<Option<f64>>,
    /// Improvement of our mean over theirs.
    pub average_improvement: Option<f64>,
    /// Paired projects where both sides are defined.
    pub pairs: usize,
    /// Absent when fewer than two pairs are available.
    pub test: Option<TestResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorComparison {
    pub indicator: Indicator,
    pub ours: Vec<Option<f64>>,
    pub ours_average: Option<f64>,
    pub against: Vec<ApproachComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub ours: String,
    pub projects: Vec<String>,
    pub indicators: Vec<IndicatorComparison>,
}

impl Comparison {
    pub fn cell(&self, indicator: Indicator, approach: &str) -> Option<&ApproachComparison> {
        self.indicators.iter().find(|i| i.indicator == indicator)?.against.iter().find(|a| a.approach == approach)
    }
}

/// Improvement percentages, Wilcoxon p-values and Cliff's delta of our
/// per-project scores against each approach in `against`, over the
/// projects of `ours` (in that order).
pub fn compare_against_published<S: AsRef<str>>(
    ours_name: &str,
    ours: &[(String, Scores)],
    published: &PublishedScores,
    against: &[S],
) -> Result<Comparison> {
    let projects: Vec<String> = ours.iter().map(|(p, _)| p.clone()).collect();
    let mut indicators = Vec::new();
    for indicator in Indicator::ALL {
        let our_values: Vec<Option<f64>> = ours.iter().map(|(_, s)| s.get(indicator)).collect();
        let ours_defined: Vec<f64> = our_values.iter().flatten().copied().collect();
        let ours_average = mean(&ours_defined);
        let mut rows = Vec::new();
        for approach in against {
            let approach = approach.as_ref();
            let values =
                projects.iter().map(|p| published.get(approach, p, indicator)).collect::<Result<Vec<f64>>>()?;
            let improvements = our_values.iter().zip(&values).map(|(o, v)| improvement(*o, Some(*v))).collect();
            let (a, b): (Vec<f64>, Vec<f64>) =
                our_values.iter().zip(&values).filter_map(|(o, v)| o.map(|o| (o, *v))).unzip();
            let test = if a.len() >= 2 { Some(compare_samples(&a, &b)?) } else { None };
            let average = mean(&values);
            rows.push(ApproachComparison {
                approach: approach.to_string(),
                average_improvement: improvement(ours_average, average),
                average,
                values,
                improvements,
                pairs: a.len(),
                test,
            });
        }
        indicators.push(IndicatorComparison { indicator, ours: our_values, ours_average, against: rows });
    }
    Ok(Comparison { ours: ours_name.to_string(), projects, indicators })
}

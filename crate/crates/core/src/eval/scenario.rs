use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::exec;
use crate::matchers::{classify_corpus, classify_mat, extend_tags, Classifier, MatchStrategy, Prediction, TagSet};
use crate::tm::{combine_with_mat, predict_corpus, train_model, NbmModel, TmConfig, VotingEnsemble};

use super::metrics::{confusion, scores, AverageScores, ConfusionMatrix, Indicator, Scores};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    #[default]
    Mto,
    Oto,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Mto => "mto",
            Scenario::Oto => "oto",
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mto" => Ok(Scenario::Mto),
            "oto" => Ok(Scenario::Oto),
            other => Err(Error::InvalidInput(format!("unknown scenario {other:?}"))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A classifier and everything it needs to run on any target project.
#[derive(Debug, Clone)]
pub enum ClassifierSpec {
    Unsupervised(Classifier),
    /// Fuzzy MAT whose tag set grows per project. Projects absent from
    /// `project_tags` use `base` alone.
    MatExt {
        base: TagSet,
        project_tags: BTreeMap<String, Vec<String>>,
    },
    Tm(TmConfig),
    TmPlusMat {
        config: TmConfig,
        tags: TagSet,
    },
}

impl ClassifierSpec {
    pub fn name(&self) -> String {
        match self {
            ClassifierSpec::Unsupervised(Classifier::Mat { strategy, .. }) => match strategy {
                MatchStrategy::Strict => "mat-strict".into(),
                MatchStrategy::Fuzzy => "mat-fuzzy".into(),
            },
            ClassifierSpec::Unsupervised(Classifier::Pattern(_)) => "pattern".into(),
            ClassifierSpec::MatExt { .. } => "mat-ext".into(),
            ClassifierSpec::Tm(_) => "tm".into(),
            ClassifierSpec::TmPlusMat { .. } => "tm+mat".into(),
        }
    }

    pub fn is_supervised(&self) -> bool {
        matches!(self, ClassifierSpec::Tm(_) | ClassifierSpec::TmPlusMat { .. })
    }

    fn tm_config(&self) -> Option<&TmConfig> {
        match self {
            ClassifierSpec::Tm(config) | ClassifierSpec::TmPlusMat { config, .. } => Some(config),
            _ => None,
        }
    }

    /// Predictions of an unsupervised spec. MAT-ext picks each comment's
    /// tag set by its project name, case-insensitively.
    pub fn predict_unsupervised(&self, target: &Corpus) -> Result<Vec<Prediction>> {
        match self {
            ClassifierSpec::Unsupervised(classifier) => Ok(classify_corpus(target, classifier)),
            ClassifierSpec::MatExt { base, project_tags } => {
                let mut sets: BTreeMap<&str, TagSet> = BTreeMap::new();
                for project in target.projects() {
                    let extra = project_tags.iter().find(|(k, _)| k.eq_ignore_ascii_case(project)).map(|(_, v)| v);
                    let tags = match extra {
                        Some(extra) => extend_tags(base, extra)?,
                        None => base.clone(),
                    };
                    sets.insert(project, tags);
                }
                Ok(exec::map(target.comments(), |c| classify_mat(c, &sets[c.project.as_str()], MatchStrategy::Fuzzy)))
            }
            _ => Err(Error::InvalidInput(format!("{} needs training data", self.name()))),
        }
    }

    pub fn supervised_predictions(&self, target: &Corpus, ensemble: &VotingEnsemble) -> Vec<Prediction> {
        match self {
            ClassifierSpec::TmPlusMat { tags, .. } => combine_with_mat(target, tags, ensemble),
            _ => predict_corpus(target, ensemble),
        }
    }
}

/// Scores for one target project.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectResult {
    pub project: String,
    pub comments: usize,
    pub satd: usize,
    /// Absent when the scores are an average over several runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confusion: Option<ConfusionMatrix>,
    pub scores: Scores,
    /// Single-source runs behind an averaged row.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub runs: Vec<SourceRun>,
    /// Predictions on the target, when a single prediction set exists.
    #[serde(skip)]
    pub predictions: Option<Vec<Prediction>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceRun {
    pub source: String,
    pub confusion: ConfusionMatrix,
    pub scores: Scores,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub classifier: String,
    pub scenario: Scenario,
    pub projects: Vec<ProjectResult>,
    pub average: AverageScores,
}

impl ScenarioResult {
    fn new(classifier: String, scenario: Scenario, projects: Vec<ProjectResult>) -> Self {
        let average = AverageScores::of(projects.iter().map(|p| &p.scores));
        ScenarioResult { classifier, scenario, projects, average }
    }

    pub fn project(&self, name: &str) -> Option<&ProjectResult> {
        self.projects.iter().find(|p| p.project == name)
    }

    /// Defined values of `indicator` in project order.
    pub fn column(&self, indicator: Indicator) -> Vec<Option<f64>> {
        self.projects.iter().map(|p| p.scores.get(indicator)).collect()
    }
}

fn check_inputs(spec: &ClassifierSpec, corpora: &[Corpus]) -> Result<()> {
    if corpora.is_empty() {
        return Err(Error::InvalidInput("no corpora to evaluate".into()));
    }
    if spec.is_supervised() && corpora.len() < 2 {
        return Err(Error::InvalidInput("cross-project training needs at least two corpora".into()));
    }
    if let Some(c) = corpora.iter().find(|c| !c.is_labeled() || c.is_empty()) {
        return Err(Error::Unlabeled(c.name().to_string()));
    }
    Ok(())
}

fn train_all(spec: &ClassifierSpec, corpora: &[Corpus]) -> Result<Vec<NbmModel>> {
    let config = spec.tm_config().expect("supervised spec");
    exec::try_map(corpora, |c| train_model(c, config))
}

fn single_result(target: &Corpus, predictions: Vec<Prediction>) -> Result<ProjectResult> {
    let m = confusion(&predictions, target)?;
    Ok(ProjectResult {
        project: target.name().to_string(),
        comments: target.len(),
        satd: target.satd_count(),
        confusion: Some(m),
        scores: scores(&m),
        runs: Vec::new(),
        predictions: Some(predictions),
    })
}

fn target_context(target: &Corpus) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::Training { project: target.name().to_string(), source: Box::new(e) }
}

/// Many-to-one: each corpus in turn is the target. Supervised specs vote
/// with one sub-model per remaining corpus; per-project models are trained
/// once and reused across targets.
pub fn run_mto(spec: &ClassifierSpec, corpora: &[Corpus]) -> Result<ScenarioResult> {
    check_inputs(spec, corpora)?;
    let projects = if spec.is_supervised() {
        let models = train_all(spec, corpora)?;
        let targets: Vec<usize> = (0..corpora.len()).collect();
        exec::try_map(&targets, |&t| {
            let target = &corpora[t];
            let others = models.iter().enumerate().filter(|(i, _)| *i != t).map(|(_, m)| m.clone()).collect();
            let ensemble = VotingEnsemble::new(others).map_err(target_context(target))?;
            single_result(target, spec.supervised_predictions(target, &ensemble))
        })?
    } else {
        exec::try_map(corpora, |target| single_result(target, spec.predict_unsupervised(target)?))?
    };
    Ok(ScenarioResult::new(spec.name(), Scenario::Mto, projects))
}

/// One-to-one: supervised specs score each single-source model on the
/// target and report the per-indicator mean. Unsupervised specs are scored
/// exactly as under many-to-one.
pub fn run_oto(spec: &ClassifierSpec, corpora: &[Corpus]) -> Result<ScenarioResult> {
    if !spec.is_supervised() {
        let mut result = run_mto(spec, corpora)?;
        result.scenario = Scenario::Oto;
        return Ok(result);
    }
    check_inputs(spec, corpora)?;
    let models = train_all(spec, corpora)?;
    let targets: Vec<usize> = (0..corpora.len()).collect();
    let projects = exec::try_map(&targets, |&t| {
        let target = &corpora[t];
        let mut runs = Vec::new();
        for (i, model) in models.iter().enumerate().filter(|(i, _)| *i != t) {
            let single = VotingEnsemble::new(vec![model.clone()]).map_err(target_context(target))?;
            let m = confusion(&spec.supervised_predictions(target, &single), target)?;
            runs.push(SourceRun { source: corpora[i].name().to_string(), confusion: m, scores: scores(&m) });
        }
        let avg = AverageScores::of(runs.iter().map(|r| &r.scores));
        Ok::<_, Error>(ProjectResult {
            project: target.name().to_string(),
            comments: target.len(),
            satd: target.satd_count(),
            confusion: None,
            scores: Scores { precision: avg.precision.value, recall: avg.recall.value, f1: avg.f1.value },
            runs,
            predictions: None,
        })
    })?;
    Ok(ScenarioResult::new(spec.name(), Scenario::Oto, projects))
}

pub fn run_scenario(spec: &ClassifierSpec, corpora: &[Corpus], scenario: Scenario) -> Result<ScenarioResult> {
    match scenario {
        Scenario::Mto => run_mto(spec, corpora),
        Scenario::Oto => run_oto(spec, corpora),
    }
}

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use satd_core::corpus::{read_corpus, Corpus};
use satd_core::eval::{ClassifierSpec, Format, Scenario};
use satd_core::matchers::{
    bundled_project_tags, read_project_tags, Classifier, MatchStrategy, PatternSet, Prediction, TagSet,
};
use satd_core::textprep::StopWordSet;
use satd_core::tm::{TermWeighting, TmConfig};

use crate::{ClassifierKind, FormatArg, MatcherArgs, ScenarioArg, StrategyArg, TmArgs, WeightingArg};

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
            FormatArg::Csv => Format::Csv,
        }
    }
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Mto => Scenario::Mto,
            ScenarioArg::Oto => Scenario::Oto,
        }
    }
}

/// Corpus files named directly, plus every `.jsonl` file (sorted) inside
/// named directories. A file holding several projects is split per project.
pub fn load_corpora(paths: &[PathBuf]) -> Result<Vec<Corpus>> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(path)
                .with_context(|| format!("reading directory {}", path.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|e| e == "jsonl"))
                .collect();
            found.sort();
            if found.is_empty() {
                bail!("no .jsonl corpus files in {}", path.display());
            }
            files.extend(found);
        } else {
            files.push(path.clone());
        }
    }
    let mut corpora = Vec::new();
    for file in files {
        let corpus = read_corpus(&file)?;
        if corpus.projects().len() > 1 {
            corpora.extend(corpus.split_by_project());
        } else {
            corpora.push(corpus);
        }
    }
    Ok(corpora)
}

pub fn tag_set(args: &MatcherArgs) -> Result<TagSet> {
    Ok(match &args.tags {
        Some(path) => TagSet::from_file(path)?,
        None => TagSet::default(),
    })
}

pub fn tm_config(args: &TmArgs) -> Result<TmConfig> {
    if !(args.ratio > 0.0 && args.ratio <= 1.0) {
        bail!("--ratio must lie in (0, 1]");
    }
    if args.alpha.is_nan() || args.alpha <= 0.0 {
        bail!("--alpha must be positive");
    }
    Ok(TmConfig {
        ratio: args.ratio,
        alpha: args.alpha,
        weighting: match args.weighting {
            WeightingArg::TfIdf => TermWeighting::TfIdf,
            WeightingArg::Counts => TermWeighting::Counts,
        },
        stopwords: match &args.stopwords {
            Some(path) => StopWordSet::from_file(path)?,
            None => StopWordSet::english(),
        },
    })
}

pub fn spec(kind: ClassifierKind, matcher: &MatcherArgs, tm: &TmArgs) -> Result<ClassifierSpec> {
    let mat = |strategy| -> Result<ClassifierSpec> {
        Ok(ClassifierSpec::Unsupervised(Classifier::Mat { tags: tag_set(matcher)?, strategy }))
    };
    match kind {
        ClassifierKind::Mat => mat(match matcher.strategy {
            StrategyArg::Strict => MatchStrategy::Strict,
            StrategyArg::Fuzzy => MatchStrategy::Fuzzy,
        }),
        ClassifierKind::MatStrict => mat(MatchStrategy::Strict),
        ClassifierKind::MatFuzzy => mat(MatchStrategy::Fuzzy),
        ClassifierKind::MatExt => Ok(ClassifierSpec::MatExt {
            base: tag_set(matcher)?,
            project_tags: match &matcher.project_tags {
                Some(path) => read_project_tags(path)?,
                None => bundled_project_tags(),
            },
        }),
        ClassifierKind::Pattern => {
            let Some(path) = &matcher.patterns else {
                bail!("the pattern classifier needs --patterns FILE");
            };
            Ok(ClassifierSpec::Unsupervised(Classifier::Pattern(PatternSet::from_file(path)?)))
        }
        ClassifierKind::Tm => Ok(ClassifierSpec::Tm(tm_config(tm)?)),
        ClassifierKind::TmMat => Ok(ClassifierSpec::TmPlusMat { config: tm_config(tm)?, tags: tag_set(matcher)? }),
    }
}

/// Writes to `out`, or stdout when absent.
pub fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

pub fn predictions_jsonl(predictions: &[Prediction]) -> Result<String> {
    let mut out = String::new();
    for p in predictions {
        out += &serde_json::to_string(p)?;
        out.push('\n');
    }
    Ok(out)
}

pub fn read_predictions(path: &Path) -> Result<Vec<Prediction>> {
    let content = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    content
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).with_context(|| format!("{}:{}: malformed prediction", path.display(), i + 1))
        })
        .collect()
}

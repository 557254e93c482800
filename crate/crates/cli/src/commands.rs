use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use satd_core::config::KeyValues;
use satd_core::corpus::{import_benchmark, import_benchmark_projects, read_corpus, write_corpus, Corpus, LabelMapping};
use satd_core::eval::{
    compare_against_published, overlap_analysis, render_comparison, render_overlap, render_scores, run_scenario,
    ApproachPredictions, ClassifierSpec, Format, PublishedScores, Scenario, Scores,
};
use satd_core::exec::Execution;
use satd_core::extractor::{scan_files, FilterConfig, LanguageProfile};
use satd_core::matchers::{Evidence, Prediction};
use satd_core::tm::{combine_with_mat, predict_corpus, train_ensemble, VotingEnsemble};
use walkdir::WalkDir;

use crate::inputs::{emit, load_corpora, predictions_jsonl, read_predictions, spec, tag_set, tm_config};
use crate::{ClassifierKind, ClassifyArgs, Command, CompareArgs, EvaluateArgs, ImportArgs, ScanArgs, TrainArgs};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Import(args) => import(args),
        Command::Scan(args) => scan(args),
        Command::Classify(args) => classify(args),
        Command::Train(args) => train(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Compare(args) => compare(args),
    }
}

fn summary_line(corpus: &Corpus) -> String {
    let pct = if corpus.is_empty() { 0.0 } else { 100.0 * corpus.satd_count() as f64 / corpus.len() as f64 };
    format!("{}: {} comments, {} SATD ({pct:.2}%)", corpus.name(), corpus.len(), corpus.satd_count())
}

fn import(args: ImportArgs) -> Result<()> {
    let mapping = match &args.label_map {
        Some(path) => LabelMapping::from_file(path)?,
        None => LabelMapping::default(),
    };
    match &args.projects {
        Some(projects) => {
            let corpora = import_benchmark_projects(&args.comments, &args.labels, projects, &mapping)?;
            fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
            for corpus in &corpora {
                write_corpus(corpus, &args.out.join(format!("{}.jsonl", corpus.name())))?;
                println!("{}", summary_line(corpus));
            }
        }
        None => {
            let corpus = import_benchmark(&args.project, &args.comments, &args.labels, &mapping)?;
            write_corpus(&corpus, &args.out)?;
            println!("{}", summary_line(&corpus));
        }
    }
    Ok(())
}

fn source_files(input: &Path, profile: &LanguageProfile) -> Result<Vec<PathBuf>> {
    if !input.exists() {
        bail!("{} does not exist", input.display());
    }
    if input.is_file() {
        return Ok(vec![input.to_path_buf()]);
    }
    let mut files = Vec::new();
    for entry in WalkDir::new(input).sort_by_file_name() {
        let entry = entry.with_context(|| format!("walking {}", input.display()))?;
        if entry.file_type().is_file() && profile.matches_path(entry.path()) {
            files.push(entry.into_path());
        }
    }
    Ok(files)
}

fn scan(args: ScanArgs) -> Result<()> {
    let mut profile = LanguageProfile::java();
    let mut filters = FilterConfig::default();
    if let Some(path) = &args.config {
        let kv = KeyValues::read(path)?;
        profile.apply(&kv)?;
        filters.apply(&kv)?;
    }
    let files = source_files(&args.input, &profile)?;
    if files.is_empty() {
        eprintln!("warning: no matching source files under {}", args.input.display());
    }
    let project = match &args.project {
        Some(p) => p.clone(),
        None => args
            .input
            .canonicalize()
            .ok()
            .and_then(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()))
            .unwrap_or_else(|| "project".to_string()),
    };
    let output = scan_files(&project, &files, &profile, &filters, Execution::Parallel)?;
    for w in &output.warnings {
        eprintln!("warning: {}:{}: {}", w.file.display(), w.line, w.message);
    }
    write_corpus(&output.corpus, &args.out)?;

    let s = &output.summary;
    let report = match Format::from(args.format) {
        Format::Json => satd_core::eval::to_json(s)?,
        Format::Text => {
            let mut out = format!(
                "files: {}\nextracted: {}\nafter grouping: {}\nkept: {}\n",
                s.files, s.extracted, s.grouped, s.kept
            );
            for (reason, n) in &s.dropped {
                let _ = writeln!(out, "dropped {reason}: {n}");
            }
            out
        }
        Format::Csv => {
            let mut out = format!(
                "item,count\nfiles,{}\nextracted,{}\ngrouped,{}\nkept,{}\n",
                s.files, s.extracted, s.grouped, s.kept
            );
            for (reason, n) in &s.dropped {
                let _ = writeln!(out, "dropped-{reason},{n}");
            }
            out
        }
    };
    print!("{report}");
    Ok(())
}

fn ensemble_for(model: Option<&Path>, train: &[PathBuf], tm: &crate::TmArgs) -> Result<VotingEnsemble> {
    match (model, train.is_empty()) {
        (Some(path), true) => Ok(VotingEnsemble::load(path)?),
        (None, false) => Ok(train_ensemble(&load_corpora(train)?, &tm_config(tm)?)?),
        (Some(_), false) => bail!("give either --model or --train, not both"),
        (None, true) => bail!("tm classifiers need --model FILE or --train CORPUS..."),
    }
}

fn evidence_text(e: &Option<Evidence>) -> String {
    match e {
        Some(Evidence::Tag { tag, token }) => format!("tag {tag} in \"{token}\""),
        Some(Evidence::Pattern { pattern }) => format!("pattern \"{pattern}\""),
        Some(Evidence::Model { votes, models }) => format!("{votes}/{models} votes"),
        None => String::new(),
    }
}

fn classify(args: ClassifyArgs) -> Result<()> {
    let corpus = read_corpus(&args.corpus)?;
    let predictions: Vec<Prediction> = match args.classifier {
        ClassifierKind::Tm | ClassifierKind::TmMat => {
            let ensemble = ensemble_for(args.model.as_deref(), &args.train, &args.tm)?;
            if args.classifier == ClassifierKind::Tm {
                predict_corpus(&corpus, &ensemble)
            } else {
                combine_with_mat(&corpus, &tag_set(&args.matcher)?, &ensemble)
            }
        }
        kind => spec(kind, &args.matcher, &args.tm)?.predict_unsupervised(&corpus)?,
    };
    if let Some(out) = &args.out {
        emit(Some(out), &predictions_jsonl(&predictions)?)?;
    }

    let satd = predictions.iter().filter(|p| p.label.is_satd()).count();
    let report = match Format::from(args.format) {
        Format::Json => satd_core::eval::to_json(&serde_json::json!({
            "comments": corpus.len(),
            "satd": satd,
            "predictions": predictions,
        }))?,
        Format::Text => {
            let mut out = String::new();
            for (p, c) in predictions.iter().zip(corpus.comments()) {
                if !p.label.is_satd() {
                    continue;
                }
                let place = match &c.origin {
                    Some(o) => format!("{}:{}", o.file.display(), o.start_line),
                    None => format!("{}#{}", c.project, c.id),
                };
                let first = c.text.lines().next().unwrap_or_default();
                let _ = writeln!(out, "{place}: SATD [{}] {first}", evidence_text(&p.evidence));
            }
            let _ = writeln!(out, "{satd} of {} comments flagged as SATD", corpus.len());
            out
        }
        Format::Csv => {
            let mut out = String::from("project,id,label,file,line,evidence\n");
            for (p, c) in predictions.iter().zip(corpus.comments()) {
                let (file, line) = c.origin.as_ref().map_or((String::new(), String::new()), |o| {
                    (o.file.display().to_string(), o.start_line.to_string())
                });
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    csv_field(&p.project),
                    p.id,
                    p.label,
                    csv_field(&file),
                    line,
                    csv_field(&evidence_text(&p.evidence))
                );
            }
            out
        }
    };
    print!("{report}");
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn train(args: TrainArgs) -> Result<()> {
    let corpora = load_corpora(&args.corpora)?;
    let ensemble = train_ensemble(&corpora, &tm_config(&args.tm)?)?;
    ensemble.save(&args.out)?;
    for m in ensemble.sub_models() {
        println!(
            "{}: {} of {} features over {} comments",
            m.source,
            m.vocabulary.len(),
            m.vocabulary.candidates,
            m.vocabulary.documents
        );
    }
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Result<()> {
    let corpora = load_corpora(&args.corpora)?;
    let scenario = Scenario::from(args.scenario);
    let mut results = Vec::new();
    for kind in &args.classifier {
        let spec = spec(*kind, &args.matcher, &args.tm)?;
        results.push(run_scenario(&spec, &corpora, scenario)?);
    }
    if let Some(dir) = &args.save_predictions {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for r in &results {
            let Some(all) = r.projects.iter().map(|p| p.predictions.clone()).collect::<Option<Vec<_>>>() else {
                eprintln!("warning: {} under {} averages several runs; no predictions saved", r.classifier, r.scenario);
                continue;
            };
            let flat: Vec<Prediction> = all.into_iter().flatten().collect();
            emit(Some(&dir.join(format!("{}.jsonl", r.classifier))), &predictions_jsonl(&flat)?)?;
        }
    }
    emit(args.out.as_deref(), &render_scores(&results, Format::from(args.format))?)
}

fn compare(args: CompareArgs) -> Result<()> {
    let scenario = Scenario::from(args.scenario);
    let published = match &args.published {
        Some(path) => PublishedScores::from_file(path)?,
        None => PublishedScores::bundled(scenario),
    };
    let format = Format::from(args.format);

    let ours: Option<(String, Vec<(String, Scores)>)> = if let Some(approach) = &args.ours_published {
        let projects = published.projects(approach);
        if projects.is_empty() {
            bail!("approach {approach:?} has no rows in the published table");
        }
        Some((approach.clone(), published.scores_for(approach, &projects)?))
    } else if !args.corpora.is_empty() {
        let spec: ClassifierSpec = spec(args.classifier, &args.matcher, &args.tm)?;
        let result = run_scenario(&spec, &load_corpora(&args.corpora)?, scenario)?;
        Some((result.classifier.clone(), result.projects.iter().map(|p| (p.project.clone(), p.scores)).collect()))
    } else {
        None
    };

    let comparison = match &ours {
        Some((name, scores)) => {
            let against: Vec<String> = if args.against.is_empty() {
                published
                    .approaches()
                    .iter()
                    .filter(|a| !a.eq_ignore_ascii_case("MAT") && !a.eq_ignore_ascii_case(name))
                    .cloned()
                    .collect()
            } else {
                args.against.clone()
            };
            Some(compare_against_published(name, scores, &published, &against)?)
        }
        None => None,
    };

    let overlap = if args.predictions.is_empty() {
        None
    } else {
        let Some(gold) = &args.gold else { bail!("--predictions needs --gold CORPUS") };
        let gold = read_corpus(gold)?;
        let mut approaches = Vec::new();
        for item in &args.predictions {
            let Some((name, file)) = item.split_once('=') else {
                bail!("--predictions expects NAME=FILE, got {item:?}");
            };
            approaches
                .push(ApproachPredictions { name: name.to_string(), predictions: read_predictions(Path::new(file))? });
        }
        Some(overlap_analysis(&approaches, &gold)?)
    };

    if comparison.is_none() && overlap.is_none() {
        bail!("nothing to compare: give corpora, --ours-published, or --predictions with --gold");
    }
    let out = match format {
        Format::Json => satd_core::eval::to_json(&serde_json::json!({
            "scenario": scenario,
            "comparison": comparison,
            "overlap": overlap,
        }))?,
        _ => {
            let mut out = String::new();
            if let Some(c) = &comparison {
                out += &render_comparison(c, format)?;
            }
            if let Some(o) = &overlap {
                if !out.is_empty() {
                    out.push('\n');
                }
                out += &render_overlap(o, format)?;
            }
            out
        }
    };
    emit(args.out.as_deref(), &out)
}

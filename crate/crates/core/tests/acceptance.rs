//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line on stdout
//! (written past the test harness capture so it shows in a plain
//! `cargo test` run) and then asserts its own outcome.
//!
//! Criteria that need the ten-project benchmark read it from the directory
//! named by `SATD_BENCHMARK_DIR`, falling back to `data/benchmark` at the
//! workspace root. Accepted layouts:
//!
//! * `comments[.txt]`, `labels[.txt]` and `projects[.txt]`, line-parallel;
//! * one sub-directory per project holding `comments[.txt]` and `labels[.txt]`;
//! * `*.jsonl` corpora as written by the `import` command.
//!
//! An optional `label_map[.txt]` in the same directory overrides the default
//! label vocabulary. Without the data those criteria report FAIL as blocked.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use satd_core::corpus::{
    import_benchmark, import_benchmark_projects, parse_corpus, read_corpus, write_corpus_to, Comment, CommentKind,
    Corpus, Label, LabelMapping,
};
use satd_core::eval::{
    cliffs_delta, compare_against_published, run_mto, run_oto, scores, wilcoxon_signed_rank, ClassifierSpec,
    ConfusionMatrix, Indicator, PublishedScores, Scenario, ScenarioResult, BENCHMARK_PROJECTS,
};
use satd_core::exec::{self, Execution};
use satd_core::matchers::{
    bundled_project_tags, classify_corpus_with, classify_mat, extend_tags, Classifier, MatchStrategy, TagSet,
};
use satd_core::tm::{combine_with_mat, predict_corpus, train_ensemble, TmConfig};

const TABLE_TOLERANCE: f64 = 0.005;
const MAT_EXT_TOLERANCE: f64 = 0.02;
const DELTA_TOLERANCE: f64 = 0.005;
const P_VALUE_SOFT_TOLERANCE: f64 = 0.01;
const TM_TOLERANCE: f64 = 0.10;
const TM_MTO_F1: f64 = 0.696;
const TM_OTO_PRECISION: f64 = 0.420;
const F1_IDENTITY_TOLERANCE: f64 = 1e-12;
const SEED: u64 = 0x5a7d_2019;

/// Strict-matching precision, recall and F1 per project, then the average.
const STRICT_TABLE: [(&str, [f64; 3]); 11] = [
    ("Ant", [0.865, 0.441, 0.584]),
    ("ArgoUML", [0.838, 0.934, 0.883]),
    ("Columba", [0.912, 0.813, 0.860]),
    ("EMF", [1.000, 0.338, 0.505]),
    ("Hibernate", [0.944, 0.714, 0.813]),
    ("JEdit", [0.844, 0.195, 0.317]),
    ("JFreeChart", [0.723, 0.723, 0.723]),
    ("JMeter", [0.924, 0.780, 0.846]),
    ("JRuby", [0.911, 0.877, 0.894]),
    ("Squirrel", [0.925, 0.612, 0.737]),
    ("Average", [0.889, 0.643, 0.716]),
];

/// MAT-ext precision, recall and F1 on the projects with extra tags.
const MAT_EXT_TABLE: [(&str, [f64; 3]); 7] = [
    ("Columba", [0.910, 0.867, 0.888]),
    ("EMF", [0.898, 0.595, 0.715]),
    ("Hibernate", [0.930, 0.743, 0.826]),
    ("JEdit", [0.683, 0.441, 0.536]),
    ("JMeter", [0.907, 0.798, 0.849]),
    ("Squirrel", [0.923, 0.652, 0.764]),
    ("Average", [0.908, 0.659, 0.748]),
];

struct StatsRow {
    approach: &'static str,
    /// Precision, recall, F1.
    p: [f64; 3],
    delta: [f64; 3],
}

const MTO_STATS: [StatsRow; 4] = [
    StatsRow { approach: "Pattern", p: [0.037, 0.002, 0.002], delta: [0.680, 1.000, 1.000] },
    StatsRow { approach: "NLP", p: [0.001, 0.413, 0.054], delta: [0.917, 0.107, 0.306] },
    StatsRow { approach: "TM", p: [0.002, 0.799, 0.106], delta: [0.720, 0.000, 0.280] },
    StatsRow { approach: "CNN", p: [0.002, 0.006, 0.375], delta: [0.620, -0.260, 0.040] },
];

const OTO_STATS: [StatsRow; 4] = [
    StatsRow { approach: "Pattern", p: [0.037, 0.002, 0.002], delta: [0.680, 1.000, 1.000] },
    StatsRow { approach: "NLP", p: [0.007, 0.001, 0.001], delta: [0.785, 0.521, 0.570] },
    StatsRow { approach: "TM", p: [0.002, 0.359, 0.004], delta: [1.000, 0.200, 0.680] },
    StatsRow { approach: "CNN", p: [0.002, 0.058, 0.014], delta: [1.000, 0.510, 0.560] },
];

struct Outcome {
    id: u8,
    title: &'static str,
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(id: u8, title: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        Outcome { id, title, pass, detail: detail.into() }
    }

    fn blocked(id: u8, title: &'static str, reason: &str, extra: &str) -> Self {
        let mut detail = format!("blocked: {reason}");
        if !extra.is_empty() {
            detail.push_str("; ");
            detail.push_str(extra);
        }
        Outcome::new(id, title, false, detail)
    }

    /// Prints the line and fails the test when the criterion is not met.
    fn finish(self) {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let line = format!("{verdict} criterion {}: {}: {}\n", self.id, self.title, self.detail);
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(line.as_bytes());
        let _ = out.flush();
        assert!(self.pass, "criterion {} failed: {}", self.id, self.detail);
    }
}

// ---------------------------------------------------------------- dataset

fn benchmark_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os("SATD_BENCHMARK_DIR") {
        return Some(PathBuf::from(dir));
    }
    let fallback = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/benchmark");
    fallback.is_dir().then_some(fallback)
}

fn find_file(dir: &Path, stem: &str) -> Option<PathBuf> {
    [stem.to_string(), format!("{stem}.txt")].into_iter().map(|n| dir.join(n)).find(|p| p.is_file())
}

fn canonical_project(raw: &str) -> Option<&'static str> {
    let lower = raw.to_ascii_lowercase();
    // longest first so "ant" cannot claim a longer name
    let mut names = BENCHMARK_PROJECTS;
    names.sort_by_key(|n| std::cmp::Reverse(n.len()));
    names.into_iter().find(|n| lower.contains(&n.to_ascii_lowercase()))
}

fn load_raw(dir: &Path) -> Result<Vec<Corpus>, String> {
    let mapping = match find_file(dir, "label_map") {
        Some(p) => LabelMapping::from_file(&p).map_err(|e| e.to_string())?,
        None => LabelMapping::default(),
    };
    if let (Some(c), Some(l), Some(p)) =
        (find_file(dir, "comments"), find_file(dir, "labels"), find_file(dir, "projects"))
    {
        return import_benchmark_projects(&c, &l, &p, &mapping).map_err(|e| e.to_string());
    }
    let mut entries: Vec<PathBuf> =
        std::fs::read_dir(dir).map_err(|e| e.to_string())?.filter_map(|e| e.ok().map(|e| e.path())).collect();
    entries.sort();
    let mut corpora = Vec::new();
    for path in entries {
        if path.is_dir() {
            if let (Some(c), Some(l)) = (find_file(&path, "comments"), find_file(&path, "labels")) {
                let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
                corpora.push(import_benchmark(&name, &c, &l, &mapping).map_err(|e| e.to_string())?);
            }
        } else if path.extension().is_some_and(|e| e == "jsonl") {
            corpora.extend(read_corpus(&path).map_err(|e| e.to_string())?.split_by_project());
        }
    }
    Ok(corpora)
}

/// The ten benchmark projects in table order, renamed to their canonical
/// names (comment project fields included).
fn benchmark() -> Result<Vec<Corpus>, String> {
    let dir = benchmark_dir().ok_or("benchmark dataset not found (set SATD_BENCHMARK_DIR)")?;
    let raw = load_raw(&dir)?;
    let mut out = Vec::new();
    for name in BENCHMARK_PROJECTS {
        let corpus = raw
            .iter()
            .find(|c| canonical_project(c.name()) == Some(name))
            .ok_or_else(|| format!("project {name} missing from {}", dir.display()))?;
        let comments = corpus
            .comments()
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.project = name.to_string();
                c
            })
            .collect();
        out.push(Corpus::new(name, comments).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

// -------------------------------------------------------------- synthetic

const SATD_WORDS: &[&str] =
    &["todo", "fixme", "hack", "xxx", "ugly", "workaround", "temporary", "kludge", "broken", "pleasefixme"];
const PLAIN_WORDS: &[&str] = &[
    "return", "value", "list", "parser", "method", "the", "of", "node", "index", "buffer", "user", "event", "window",
    "stream", "é", "naïve", "to", "do", "note", "tbd", "owner", "items",
];

fn synthetic_text(rng: &mut ChaCha8Rng, satd: bool) -> String {
    let len = rng.gen_range(2..10);
    let mut words: Vec<String> = (0..len).map(|_| PLAIN_WORDS.choose(rng).unwrap().to_string()).collect();
    if satd {
        let tag = SATD_WORDS.choose(rng).unwrap();
        let tag = match rng.gen_range(0..3) {
            0 => tag.to_uppercase(),
            1 => format!("{}:", tag.to_uppercase()),
            _ => tag.to_string(),
        };
        let at = rng.gen_range(0..=words.len());
        words.insert(at, tag);
    }
    words.join(" ")
}

fn synthetic_corpora(rng: &mut ChaCha8Rng, projects: usize, size: usize) -> Vec<Corpus> {
    (0..projects)
        .map(|p| {
            let name = format!("P{p}");
            let comments = (0..size)
                .map(|i| {
                    // both classes are always present
                    let satd = i % 5 == 0 || (i % 5 != 1 && rng.gen_bool(0.1));
                    let label = if satd { Label::Satd } else { Label::NonSatd };
                    Comment::new(&name, i as u64 + 1, synthetic_text(rng, satd), CommentKind::Line).with_label(label)
                })
                .collect();
            Corpus::new(name, comments).unwrap()
        })
        .collect()
}

fn satd_ids(predictions: &[satd_core::matchers::Prediction]) -> BTreeSet<u64> {
    predictions.iter().filter(|p| p.label.is_satd()).map(|p| p.id).collect()
}

// ------------------------------------------------------------------ helpers

fn value(result: &ScenarioResult, project: &str, indicator: Indicator) -> Option<f64> {
    if project == "Average" {
        result.average.get(indicator).value
    } else {
        result.project(project)?.scores.get(indicator)
    }
}

/// Compares every cell of `expected` and lists the ones outside `tol`.
fn table_mismatches(result: &ScenarioResult, expected: &[(&str, [f64; 3])], tol: f64) -> Vec<String> {
    let mut bad = Vec::new();
    for (project, row) in expected {
        for (indicator, want) in Indicator::ALL.into_iter().zip(row) {
            match value(result, project, indicator) {
                Some(got) if (got - want).abs() <= tol => {}
                got => bad.push(format!("{project} {indicator} {got:?} vs {want:.3}")),
            }
        }
    }
    bad
}

fn published_mat_rows(scenario: Scenario) -> Vec<(&'static str, [f64; 3])> {
    let published = PublishedScores::bundled(scenario);
    BENCHMARK_PROJECTS
        .into_iter()
        .chain(["Average"])
        .map(|p| {
            let row = Indicator::ALL.map(|i| published.get("MAT", p, i).expect("bundled MAT cell"));
            (p, row)
        })
        .collect()
}

fn summarize(bad: &[String]) -> String {
    if bad.is_empty() {
        "all cells within tolerance".into()
    } else {
        format!("{} cells off: {}", bad.len(), bad.join("; "))
    }
}

// ---------------------------------------------------------------- oracles

/// Cliff's delta by direct pair counting.
fn delta_oracle(a: &[f64], b: &[f64]) -> f64 {
    let mut sum = 0i64;
    for x in a {
        for y in b {
            sum += (x > y) as i64 - (x < y) as i64;
        }
    }
    sum as f64 / (a.len() * b.len()) as f64
}

/// Two-sided exact Wilcoxon p-value by enumerating all 2^n sign vectors.
fn wilcoxon_oracle(a: &[f64], b: &[f64]) -> f64 {
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    if diffs.is_empty() {
        return 1.0;
    }
    let n = diffs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diffs[i].abs().total_cmp(&diffs[j].abs()));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && diffs[order[j + 1]].abs() == diffs[order[i]].abs() {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            ranks[order[k]] = mid;
        }
        i = j + 1;
    }
    let total: f64 = ranks.iter().sum();
    let observed: f64 = (0..n).filter(|&k| diffs[k] > 0.0).map(|k| ranks[k]).sum();
    let threshold = (observed - total / 2.0).abs();
    let extreme = (0u32..1 << n)
        .filter(|mask| {
            let w: f64 = (0..n).filter(|k| mask & (1 << k) != 0).map(|k| ranks[k]).sum();
            (w - total / 2.0).abs() >= threshold - 1e-9
        })
        .count();
    extreme as f64 / (1u64 << n) as f64
}

// ---------------------------------------------------------------- criteria

#[test]
fn criterion_1_mat_reproduces_benchmark_tables() {
    const TITLE: &str = "MAT fuzzy and strict reproduce the benchmark tables";
    let corpora = match benchmark() {
        Ok(c) => c,
        Err(e) => return Outcome::blocked(1, TITLE, &e, "").finish(),
    };
    let fuzzy = run_mto(&ClassifierSpec::Unsupervised(Classifier::mat_fuzzy()), &corpora).unwrap();
    let strict = run_mto(&ClassifierSpec::Unsupervised(Classifier::mat_strict()), &corpora).unwrap();
    let mut bad: Vec<String> = table_mismatches(&fuzzy, &published_mat_rows(Scenario::Mto), TABLE_TOLERANCE)
        .into_iter()
        .map(|m| format!("fuzzy {m}"))
        .collect();
    bad.extend(table_mismatches(&strict, &STRICT_TABLE, TABLE_TOLERANCE).into_iter().map(|m| format!("strict {m}")));
    Outcome::new(1, TITLE, bad.is_empty(), summarize(&bad)).finish();
}

#[test]
fn criterion_2_mat_ext() {
    const TITLE: &str = "MAT-ext reproduces the project-specific tag table";
    let tags = bundled_project_tags();
    let spec = ClassifierSpec::MatExt { base: TagSet::default(), project_tags: tags.clone() };

    // recall monotonicity on generated data, independent of the benchmark
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let synthetic: Vec<Corpus> = synthetic_corpora(&mut rng, 6, 200)
        .into_iter()
        .zip(["Columba", "EMF", "Hibernate", "JEdit", "JMeter", "Squirrel"])
        .map(|(c, name)| {
            let comments = c
                .comments()
                .iter()
                .map(|c| {
                    let mut c = c.clone();
                    c.project = name.into();
                    c
                })
                .collect();
            Corpus::new(name, comments).unwrap()
        })
        .collect();
    let monotone = |corpora: &[Corpus]| -> Vec<String> {
        let ext = run_mto(&spec, corpora).unwrap();
        let mat = run_mto(&ClassifierSpec::Unsupervised(Classifier::mat_fuzzy()), corpora).unwrap();
        ext.projects
            .iter()
            .zip(&mat.projects)
            .filter(|(e, m)| e.scores.recall < m.scores.recall)
            .map(|(e, _)| e.project.clone())
            .collect()
    };
    let synthetic_bad = monotone(&synthetic);
    assert!(synthetic_bad.is_empty(), "MAT-ext recall dropped on generated data: {synthetic_bad:?}");
    let synthetic_note = "recall monotonicity holds on generated data";

    let corpora = match benchmark() {
        Ok(c) => c,
        Err(e) => return Outcome::blocked(2, TITLE, &e, synthetic_note).finish(),
    };
    let six: Vec<Corpus> = corpora.into_iter().filter(|c| tags.contains_key(&c.name().to_ascii_lowercase())).collect();
    let ext = run_mto(&spec, &six).unwrap();
    let mut bad = table_mismatches(&ext, &MAT_EXT_TABLE, MAT_EXT_TOLERANCE);
    bad.extend(monotone(&six).into_iter().map(|p| format!("{p} recall below MAT")));
    Outcome::new(2, TITLE, bad.is_empty(), summarize(&bad)).finish();
}

fn check_stats(scenario: Scenario, table: &[StatsRow], bad: &mut Vec<String>, soft: &mut Vec<String>) {
    let published = PublishedScores::bundled(scenario);
    let ours = published.scores_for("MAT", &BENCHMARK_PROJECTS).unwrap();
    let approaches: Vec<&str> = table.iter().map(|r| r.approach).collect();
    let cmp = compare_against_published("MAT", &ours, &published, &approaches).unwrap();
    for row in table {
        for (k, indicator) in Indicator::ALL.into_iter().enumerate() {
            let cell = cmp.cell(indicator, row.approach).unwrap();
            let test = cell.test.expect("ten pairs");
            let mat: Vec<f64> = ours.iter().map(|(_, s)| s.get(indicator).unwrap()).collect();
            // the library must agree with the pair-counting oracle exactly
            let oracle = delta_oracle(&mat, &cell.values);
            assert!((oracle - test.effect.delta).abs() < 1e-12, "delta oracle disagrees on {scenario} {indicator}");

            let tag = format!("{scenario} {} {indicator}", row.approach);
            if (test.effect.delta - row.delta[k]).abs() > DELTA_TOLERANCE {
                bad.push(format!("{tag} delta {:.3} vs {:.3}", test.effect.delta, row.delta[k]));
            }
            if test.significant != (row.p[k] < 0.05) {
                bad.push(format!("{tag} significance p={:.3} vs {:.3}", test.p_value, row.p[k]));
            }
            if (test.p_value - row.p[k]).abs() > P_VALUE_SOFT_TOLERANCE {
                soft.push(format!("{tag} p {:.3} vs {:.3}", test.p_value, row.p[k]));
            }
        }
    }
}

#[test]
fn criterion_3_statistics_from_published_columns() {
    const TITLE: &str = "Cliff's delta and Wilcoxon decisions from the published columns";
    let mut bad = Vec::new();
    let mut soft = Vec::new();
    check_stats(Scenario::Mto, &MTO_STATS, &mut bad, &mut soft);
    check_stats(Scenario::Oto, &OTO_STATS, &mut bad, &mut soft);
    let mut detail = summarize(&bad);
    detail.push_str(&format!("; soft p-value target: {} of 24 cells beyond ±{P_VALUE_SOFT_TOLERANCE}", soft.len()));
    if !soft.is_empty() {
        detail.push_str(&format!(" ({})", soft.join("; ")));
    }
    Outcome::new(3, TITLE, bad.is_empty(), detail).finish();
}

#[test]
fn criterion_4_tm_comparator() {
    const TITLE: &str = "TM comparator lands near the published averages";
    let corpora = match benchmark() {
        Ok(c) => c,
        Err(e) => return Outcome::blocked(4, TITLE, &e, "").finish(),
    };
    let spec = ClassifierSpec::Tm(TmConfig::default());
    let mto = run_mto(&spec, &corpora).unwrap();
    let oto = run_oto(&spec, &corpora).unwrap();
    let f1 = mto.average.f1.value.unwrap_or(f64::NAN);
    let precision = oto.average.precision.value.unwrap_or(f64::NAN);
    let pass = (f1 - TM_MTO_F1).abs() <= TM_TOLERANCE && (precision - TM_OTO_PRECISION).abs() <= TM_TOLERANCE;
    let detail = format!(
        "many-to-one F1 {f1:.3} (target {TM_MTO_F1} ± {TM_TOLERANCE}), one-to-one precision {precision:.3} (target {TM_OTO_PRECISION} ± {TM_TOLERANCE})"
    );
    Outcome::new(4, TITLE, pass, detail).finish();
}

#[test]
fn criterion_5_tm_plus_mat() {
    const TITLE: &str = "TM+MAT covers MAT and improves on TM";
    let tags = TagSet::default();

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let synthetic = synthetic_corpora(&mut rng, 4, 150);
    let ensemble = train_ensemble(&synthetic[1..], &TmConfig::default()).unwrap();
    let combined = satd_ids(&combine_with_mat(&synthetic[0], &tags, &ensemble));
    let mat = satd_ids(&classify_corpus_with(Execution::Sequential, &synthetic[0], &Classifier::mat_fuzzy()));
    let tm = satd_ids(&predict_corpus(&synthetic[0], &ensemble));
    assert!(mat.is_subset(&combined) && tm.is_subset(&combined), "TM+MAT lost a prediction on generated data");
    let synthetic_note = "superset property holds on generated data";

    let corpora = match benchmark() {
        Ok(c) => c,
        Err(e) => return Outcome::blocked(5, TITLE, &e, synthetic_note).finish(),
    };
    let plus = run_mto(&ClassifierSpec::TmPlusMat { config: TmConfig::default(), tags }, &corpora).unwrap();
    let tm = run_mto(&ClassifierSpec::Tm(TmConfig::default()), &corpora).unwrap();
    let mat = run_mto(&ClassifierSpec::Unsupervised(Classifier::mat_fuzzy()), &corpora).unwrap();
    let mut bad = Vec::new();
    for (p, m) in plus.projects.iter().zip(&mat.projects) {
        let p_ids = satd_ids(p.predictions.as_deref().unwrap());
        if !satd_ids(m.predictions.as_deref().unwrap()).is_subset(&p_ids) {
            bad.push(format!("{} misses MAT predictions", p.project));
        }
    }
    for indicator in [Indicator::Recall, Indicator::F1] {
        let ours = plus.average.get(indicator).value.unwrap_or(f64::NAN);
        let theirs = tm.average.get(indicator).value.unwrap_or(f64::NAN);
        if ours.partial_cmp(&theirs) != Some(std::cmp::Ordering::Greater) {
            bad.push(format!("average {indicator} {ours:.3} not above TM {theirs:.3}"));
        }
    }
    Outcome::new(5, TITLE, bad.is_empty(), summarize(&bad)).finish();
}

#[test]
fn criterion_6_properties() {
    const TITLE: &str = "property suites on generated data";
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = Vec::new();

    // fuzzy dominates strict, and extra tags never lose a match
    let comments: Vec<Comment> = (0..1000)
        .map(|i| {
            let satd = rng.gen_bool(0.3);
            Comment::new("gen", i + 1, synthetic_text(&mut rng, satd), CommentKind::Line)
        })
        .collect();
    let base = TagSet::default();
    let extended = extend_tags(&base, &["workaround", "tbd", "note", "remind"]).unwrap();
    let dominance = comments.iter().all(|c| {
        let strict = classify_mat(c, &base, MatchStrategy::Strict).label.is_satd();
        let fuzzy = classify_mat(c, &base, MatchStrategy::Fuzzy).label.is_satd();
        !strict || fuzzy
    });
    checks.push(("fuzzy covers strict on 1000 comments", dominance));
    let monotone = comments.iter().all(|c| {
        [MatchStrategy::Strict, MatchStrategy::Fuzzy]
            .into_iter()
            .all(|s| !classify_mat(c, &base, s).label.is_satd() || classify_mat(c, &extended, s).label.is_satd())
    });
    checks.push(("extra tags never lose a match", monotone));

    // metric identities
    let identities = (0..2000).all(|_| {
        let m = ConfusionMatrix {
            tp: rng.gen_range(0..60),
            fp: rng.gen_range(0..60),
            tn: rng.gen_range(0..60),
            fn_: rng.gen_range(0..60),
        };
        let s = scores(&m);
        match (s.precision, s.recall, s.f1) {
            (Some(p), Some(r), Some(f)) if p + r > 0.0 => (f - 2.0 * p * r / (p + r)).abs() <= F1_IDENTITY_TOLERANCE,
            (Some(_), Some(_), Some(f)) => f == 0.0,
            (p, r, f) => f.is_none() && (p.is_none() || r.is_none()),
        }
    });
    checks.push(("F1 is the harmonic mean", identities));

    // Cliff's delta: antisymmetric, bounded, matches pair counting
    let cliff = (0..300).all(|_| {
        let a: Vec<f64> = (0..rng.gen_range(1..15)).map(|_| (rng.gen_range(0..20) as f64) / 20.0).collect();
        let b: Vec<f64> = (0..rng.gen_range(1..15)).map(|_| (rng.gen_range(0..20) as f64) / 20.0).collect();
        let ab = cliffs_delta(&a, &b).unwrap().delta;
        let ba = cliffs_delta(&b, &a).unwrap().delta;
        (ab + ba).abs() < 1e-12 && (-1.0..=1.0).contains(&ab) && (ab - delta_oracle(&a, &b)).abs() < 1e-12
    });
    checks.push(("Cliff's delta antisymmetric and in range", cliff));

    // exact Wilcoxon against sign enumeration, ties and zeros included
    let wilcoxon = (0..400).all(|_| {
        let n = rng.gen_range(2..=10);
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0..8) as f64 / 4.0).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0..8) as f64 / 4.0).collect();
        (wilcoxon_signed_rank(&a, &b).unwrap() - wilcoxon_oracle(&a, &b)).abs() < 1e-12
    });
    checks.push(("exact Wilcoxon equals sign enumeration", wilcoxon));

    // corpus round trip with newlines, quotes and non-ASCII text
    const PIECES: &[&str] = &["todo", "\n", "\r\n", "\"", "\\", "é", "日本語", "🦀", "\t", " ", "{}", "naïve"];
    let round_trip = (0..50).all(|k| {
        let comments: Vec<Comment> = (0..rng.gen_range(1..20))
            .map(|i| {
                let mut text: String = (0..rng.gen_range(1..12)).map(|_| *PIECES.choose(&mut rng).unwrap()).collect();
                // blank comments are rejected on construction
                text.push_str(PIECES[rng.gen_range(5..7)]);
                let label = if rng.gen_bool(0.5) { Label::Satd } else { Label::NonSatd };
                Comment::new("rt", i + 1, text, CommentKind::Block).with_label(label)
            })
            .collect();
        let corpus = Corpus::new(format!("rt{k}"), comments).unwrap();
        let mut buf = Vec::new();
        write_corpus_to(&corpus, &mut buf).unwrap();
        let back = parse_corpus(corpus.name(), Path::new("mem"), buf.as_slice()).unwrap();
        back == corpus
    });
    checks.push(("corpus round trip", round_trip));

    // determinism under parallelism
    let corpora = synthetic_corpora(&mut rng, 4, 120);
    let sequential = classify_corpus_with(Execution::Sequential, &corpora[0], &Classifier::mat_fuzzy());
    let parallel = classify_corpus_with(Execution::Parallel, &corpora[0], &Classifier::mat_fuzzy());
    let spec = ClassifierSpec::Tm(TmConfig::default());
    let one = exec::with_parallelism(1, || serde_json::to_string(&run_oto(&spec, &corpora).unwrap()).unwrap());
    let four = exec::with_parallelism(4, || serde_json::to_string(&run_oto(&spec, &corpora).unwrap()).unwrap());
    checks.push(("identical results for 1 and 4 threads", sequential == parallel && one == four));

    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    let detail = if failed.is_empty() {
        format!("{} checks hold (seed {SEED:#x})", checks.len())
    } else {
        format!("failed: {}", failed.join(", "))
    };
    Outcome::new(6, TITLE, failed.is_empty(), detail).finish();
}

#[test]
fn criterion_7_documented_misclassifications() {
    const TITLE: &str = "documented false positives and false negatives reproduce";
    const FALSE_POSITIVES: &[&str] = &[
        "// TODO :",
        "// TODO!!!",
        "// FIXME",
        "/* XXX*",
        "/* Owner related todo items: */",
        "// Copy the todo items after the model",
        "// no item exists in table // -> nothing todo",
        "// Hack to ensure charset is set correctly at start-up",
    ];
    const FALSE_NEGATIVES: &[&str] = &[
        "// Check it out; also ugly.",
        "// Our superclass no longer has this method",
        "// this part sucks",
        "// Remember to change this when the class changes ...",
        "// Not implemented",
        "// TO DO : these annotations only work with XYPlot",
        "// TO DO : delete the file if it is not a valid file.",
    ];
    let tags = TagSet::default();
    let label =
        |text: &str| classify_mat(&Comment::new("t", 1, text, CommentKind::Line), &tags, MatchStrategy::Fuzzy).label;
    let mut bad: Vec<String> =
        FALSE_POSITIVES.iter().filter(|t| label(t) != Label::Satd).map(|t| format!("{t:?} not flagged")).collect();
    bad.extend(FALSE_NEGATIVES.iter().filter(|t| label(t) != Label::NonSatd).map(|t| format!("{t:?} flagged")));
    let detail = if bad.is_empty() {
        format!("{} false positives flagged, {} false negatives missed", FALSE_POSITIVES.len(), FALSE_NEGATIVES.len())
    } else {
        bad.join("; ")
    };
    Outcome::new(7, TITLE, bad.is_empty(), detail).finish();
}

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

use super::metrics::{Average, Indicator};
use super::overlap::{OverlapCounts, OverlapReport};
use super::published::Comparison;
use super::scenario::ScenarioResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Json,
    #[default]
    Text,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidInput(format!("unknown format {other:?}"))),
        }
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn fixed(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"))
}

fn percent(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{:.2}%", x * 100.0))
}

fn full(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Left-aligned first column, right-aligned others, two spaces apart.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c == 0 {
                let _ = write!(line, "{cell:<w$}", w = widths[0]);
            } else {
                let _ = write!(line, "  {cell:>w$}", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn csv_line(fields: &[String]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(fields).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn skipped_note(avg: &Average) -> String {
    if avg.skipped > 0 {
        format!(" ({} undefined skipped)", avg.skipped)
    } else {
        String::new()
    }
}

/// Score tables for one or more runs over the same projects, side by side.
pub fn render_scores(results: &[ScenarioResult], format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(results),
        Format::Csv => {
            let mut out =
                csv_line(&["classifier", "scenario", "project", "precision", "recall", "f1"].map(String::from));
            for r in results {
                for p in &r.projects {
                    out += &csv_line(&[
                        r.classifier.clone(),
                        r.scenario.to_string(),
                        p.project.clone(),
                        full(p.scores.precision),
                        full(p.scores.recall),
                        full(p.scores.f1),
                    ]);
                }
                out += &csv_line(&[
                    r.classifier.clone(),
                    r.scenario.to_string(),
                    "Average".into(),
                    full(r.average.precision.value),
                    full(r.average.recall.value),
                    full(r.average.f1.value),
                ]);
            }
            Ok(out)
        }
        Format::Text => {
            let Some(first) = results.first() else { return Ok(String::new()) };
            let mut header = vec!["Project".to_string()];
            for r in results {
                for ind in ["P", "R", "F1"] {
                    header.push(format!("{} {ind}", r.classifier));
                }
            }
            let mut rows = vec![header];
            for (i, p) in first.projects.iter().enumerate() {
                let mut row = vec![p.project.clone()];
                for r in results {
                    let s = r.projects.get(i).map(|p| p.scores).unwrap_or_default();
                    row.extend([fixed(s.precision), fixed(s.recall), fixed(s.f1)]);
                }
                rows.push(row);
            }
            let mut avg = vec!["Average".to_string()];
            for r in results {
                avg.extend(Indicator::ALL.map(|i| fixed(r.average.get(i).value)));
            }
            rows.push(avg);
            let mut out = format!("scenario: {}\n", first.scenario);
            out += &table(&rows);
            for r in results {
                for i in Indicator::ALL {
                    let note = skipped_note(&r.average.get(i));
                    if !note.is_empty() {
                        let _ = writeln!(out, "{} average {i}{note}", r.classifier);
                    }
                }
            }
            Ok(out)
        }
    }
}

pub fn render_comparison(cmp: &Comparison, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(cmp),
        Format::Csv => {
            let mut out = csv_line(
                &["indicator", "approach", "project", "ours", "theirs", "improvement", "p_value", "delta", "magnitude"]
                    .map(String::from),
            );
            for ind in &cmp.indicators {
                for a in &ind.against {
                    for (i, project) in cmp.projects.iter().enumerate() {
                        out += &csv_line(&[
                            ind.indicator.to_string(),
                            a.approach.clone(),
                            project.clone(),
                            full(ind.ours[i]),
                            a.values[i].to_string(),
                            full(a.improvements[i]),
                            String::new(),
                            String::new(),
                            String::new(),
                        ]);
                    }
                    out += &csv_line(&[
                        ind.indicator.to_string(),
                        a.approach.clone(),
                        "Average".into(),
                        full(ind.ours_average),
                        full(a.average),
                        full(a.average_improvement),
                        full(a.test.map(|t| t.p_value)),
                        full(a.test.map(|t| t.effect.delta)),
                        a.test.map_or_else(String::new, |t| t.effect.magnitude.as_str().to_string()),
                    ]);
                }
            }
            Ok(out)
        }
        Format::Text => {
            let mut out = String::new();
            for ind in &cmp.indicators {
                let _ = writeln!(out, "{}:", ind.indicator);
                let mut header = vec!["Project".to_string()];
                for a in &ind.against {
                    header.push(a.approach.clone());
                    header.push("Imp.".into());
                }
                header.push(cmp.ours.clone());
                let mut rows = vec![header];
                for (i, project) in cmp.projects.iter().enumerate() {
                    let mut row = vec![project.clone()];
                    for a in &ind.against {
                        row.push(fixed(Some(a.values[i])));
                        row.push(percent(a.improvements[i]));
                    }
                    row.push(fixed(ind.ours[i]));
                    rows.push(row);
                }
                let mut avg = vec!["Average".to_string()];
                for a in &ind.against {
                    avg.push(fixed(a.average));
                    avg.push(percent(a.average_improvement));
                }
                avg.push(fixed(ind.ours_average));
                rows.push(avg);
                let mut p = vec!["p-value".to_string()];
                let mut d = vec!["delta".to_string()];
                for a in &ind.against {
                    match a.test {
                        Some(t) => {
                            p.push(format!("{:.3}{}", t.p_value, if t.significant { "*" } else { "" }));
                            d.push(format!("{:.3} ({})", t.effect.delta, t.effect.magnitude.as_str()));
                        }
                        None => {
                            p.push("-".into());
                            d.push("-".into());
                        }
                    }
                    p.push(String::new());
                    d.push(String::new());
                }
                rows.push(p);
                rows.push(d);
                out += &table(&rows);
                out.push('\n');
            }
            out.push_str("* significant at 0.05\n");
            Ok(out)
        }
    }
}

fn overlap_row(project: &str, kind: &str, c: &OverlapCounts) -> Vec<String> {
    let mut row = vec![
        project.to_string(),
        kind.to_string(),
        c.total.to_string(),
        c.overlapped.to_string(),
        c.overlap_ratio.map_or_else(|| "-".into(), |r| format!("{:.2}%", r * 100.0)),
    ];
    row.extend(c.unique.iter().map(usize::to_string));
    row
}

pub fn render_overlap(report: &OverlapReport, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(report),
        Format::Text | Format::Csv => {
            let mut header: Vec<String> = ["Project", "Set", "Total", "All", "All %"].map(String::from).to_vec();
            header.extend(report.approaches.iter().map(|a| format!("only {a}")));
            let mut rows = vec![header];
            for p in report.projects.iter().chain(std::iter::once(&report.total)) {
                rows.push(overlap_row(&p.project, "TP", &p.true_positives));
                rows.push(overlap_row(&p.project, "TN", &p.true_negatives));
            }
            if format == Format::Csv {
                Ok(rows.iter().map(|r| csv_line(r)).collect())
            } else {
                Ok(table(&rows))
            }
        }
    }
}

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const SIGNIFICANCE: f64 = 0.05;

/// Sample sizes up to this use the exact null distribution.
pub const EXACT_LIMIT: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Magnitude {
    Negligible,
    Small,
    Moderate,
    Large,
}

impl Magnitude {
    pub fn of(delta: f64) -> Self {
        let d = delta.abs();
        if d < 0.147 {
            Magnitude::Negligible
        } else if d < 0.33 {
            Magnitude::Small
        } else if d < 0.474 {
            Magnitude::Moderate
        } else {
            Magnitude::Large
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Magnitude::Negligible => "negligible",
            Magnitude::Small => "small",
            Magnitude::Moderate => "moderate",
            Magnitude::Large => "large",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectSize {
    pub delta: f64,
    pub magnitude: Magnitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub p_value: f64,
    pub significant: bool,
    pub effect: EffectSize,
}

/// Cliff's delta: P(a > b) - P(a < b) over all cross pairs.
pub fn cliffs_delta(a: &[f64], b: &[f64]) -> Result<EffectSize> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("Cliff's delta needs two non-empty samples".into()));
    }
    let mut dominance: i64 = 0;
    for x in a {
        for y in b {
            dominance += match x.partial_cmp(y) {
                Some(std::cmp::Ordering::Greater) => 1,
                Some(std::cmp::Ordering::Less) => -1,
                _ => 0,
            };
        }
    }
    let delta = dominance as f64 / (a.len() * b.len()) as f64;
    Ok(EffectSize { delta, magnitude: Magnitude::of(delta) })
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * x.abs().max(y.abs())
}

/// Mid-ranks of `values` (already sorted ascending), doubled so they stay
/// integral. Values within a relative 1e-9 of their neighbour tie.
fn doubled_ranks(sorted: &[f64]) -> (Vec<u64>, Vec<usize>) {
    let mut ranks = Vec::with_capacity(sorted.len());
    let mut ties = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && close(sorted[j], sorted[j - 1]) {
            j += 1;
        }
        // ranks i+1..=j averaged, times two
        let doubled = (i + 1 + j) as u64;
        ranks.extend(std::iter::repeat_n(doubled, j - i));
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (ranks, ties)
}

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
/// are dropped and tied magnitudes get mid-ranks. Up to 25 non-zero pairs
/// the exact permutation distribution is used (ties included); beyond that
/// a normal approximation with continuity and tie correction. When every
/// pair is identical the p-value is 1.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!("paired samples differ in length: {} vs {}", a.len(), b.len())));
    }
    if a.len() < 2 {
        return Err(Error::InvalidInput("Wilcoxon test needs at least two pairs".into()));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("Wilcoxon test on non-finite values".into()));
    }
    let mut diffs: Vec<f64> = a.iter().zip(b).filter(|(x, y)| !close(**x, **y)).map(|(x, y)| x - y).collect();
    if diffs.is_empty() {
        return Ok(1.0);
    }
    diffs.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = doubled_ranks(&magnitudes);
    let n = ranks.len();
    let total: u64 = ranks.iter().sum();
    let positive: u64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();

    if n <= EXACT_LIMIT {
        Ok(exact_p(&ranks, total, positive))
    } else {
        Ok(normal_p(n, &ties, positive as f64 / 2.0))
    }
}

/// P(|2S - T| >= |2s - T|) where S is the doubled-rank sum of a random sign
/// assignment.
fn exact_p(ranks: &[u64], total: u64, observed: u64) -> f64 {
    let total = total as usize;
    let mut counts = vec![0.0f64; total + 1];
    counts[0] = 1.0;
    let mut reach = 0;
    for &r in ranks {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if counts[s] > 0.0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let deviation = |s: usize| (2 * s as i64 - total as i64).unsigned_abs();
    let threshold = deviation(observed as usize);
    let extreme: f64 = counts.iter().enumerate().filter(|(s, _)| deviation(*s) >= threshold).map(|(_, c)| c).sum();
    let all: f64 = counts.iter().sum();
    (extreme / all).min(1.0)
}

fn normal_p(n: usize, ties: &[usize], w: f64) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / 48.0;
    let sd = (nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term).sqrt();
    let z = ((w - mean).abs() - 0.5).max(0.0) / sd;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * (1.0 - normal.cdf(z))).min(1.0)
}

/// Wilcoxon p-value plus Cliff's delta for `a` against `b`.
pub fn compare_samples(a: &[f64], b: &[f64]) -> Result<TestResult> {
    let p_value = wilcoxon_signed_rank(a, b)?;
    Ok(TestResult { p_value, significant: p_value < SIGNIFICANCE, effect: cliffs_delta(a, b)? })
}

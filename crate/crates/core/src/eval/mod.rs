//! Scores, cross-project scenarios, statistical tests, set-overlap analysis
//! and comparison against published results.

mod metrics;
mod overlap;
mod published;
mod report;
mod scenario;
mod stats;

pub use metrics::{
    check_alignment, confusion, macro_average, scores, Average, AverageScores, ConfusionMatrix, Indicator, Scores,
};
pub use overlap::{overlap_analysis, ApproachPredictions, OverlapCounts, OverlapReport, ProjectOverlap, Region};
pub use published::{
    compare_against_published, improvement, ApproachComparison, Comparison, IndicatorComparison, PublishedScores,
    BENCHMARK_PROJECTS,
};
pub use report::{render_comparison, render_overlap, render_scores, to_json, Format};
pub use scenario::{
    run_mto, run_oto, run_scenario, ClassifierSpec, ProjectResult, Scenario, ScenarioResult, SourceRun,
};
pub use stats::{
    cliffs_delta, compare_samples, wilcoxon_signed_rank, EffectSize, Magnitude, TestResult, EXACT_LIMIT, SIGNIFICANCE,
};

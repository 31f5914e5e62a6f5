//! End-to-end evaluation protocol: shuffle, train on the full training set,
//! evaluate on stratified test bins, repeat, aggregate.
//!
//! One fit happens per (dataset, learner, repeat); only the test data is
//! binned. Repeat seeds derive from the base seed, so a whole experiment is
//! reproducible from a single number.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dataset::{stratified_bins, Dataset};
use crate::error::{Error, Result};
use crate::learners::{fit, LearnerKind, TrainConfig};
use crate::metrics::MetricsRecord;
use crate::stats::{median_iqr, MetricKind, ResultTable};

/// A train/test release pair with a shared feature schema.
#[derive(Debug, Clone)]
pub struct DatasetPair {
    pub name: String,
    pub train: Dataset,
    pub test: Dataset,
}

/// One learner column of the experiment: a kind plus its training config.
/// The config's seed is overridden per repeat.
#[derive(Debug, Clone)]
pub struct LearnerSpec {
    pub name: String,
    pub kind: LearnerKind,
    pub config: TrainConfig,
}

impl LearnerSpec {
    pub fn new(name: impl Into<String>, kind: LearnerKind, config: TrainConfig) -> Self {
        LearnerSpec {
            name: name.into(),
            kind,
            config,
        }
    }
}

/// The full experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub datasets: Vec<DatasetPair>,
    pub learners: Vec<LearnerSpec>,
    pub n_repeats: usize,
    pub n_bins: usize,
    pub base_seed: u64,
}

impl ExperimentPlan {
    pub fn new(datasets: Vec<DatasetPair>, learners: Vec<LearnerSpec>, base_seed: u64) -> Self {
        ExperimentPlan {
            datasets,
            learners,
            n_repeats: 10,
            n_bins: 5,
            base_seed,
        }
    }
}

/// Metrics for one (dataset, learner, repeat, bin) cell.
///
/// `wall_time_seconds` is the fit time shared by the bins of one repeat; it
/// is informational only and deliberately left out of the serialized form so
/// records files are byte-reproducible across runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset: String,
    pub learner: String,
    pub repeat: usize,
    pub bin: usize,
    pub metrics: MetricsRecord,
    #[serde(skip)]
    pub wall_time_seconds: f64,
}

/// A fit that failed; its cells are absent from the records.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitFailure {
    pub dataset: String,
    pub learner: String,
    pub repeat: usize,
    pub error: String,
}

/// Records plus isolated failures.
#[derive(Debug, Clone, Default)]
pub struct ExperimentOutcome {
    pub records: Vec<RunRecord>,
    pub failures: Vec<FitFailure>,
}

/// Run the whole plan. For each repeat the training and test sets are
/// shuffled with a repeat-specific seed, each learner is fit once on the full
/// training set, and the model is evaluated on each stratified test bin.
/// Learner failures are recorded and skipped rather than aborting the run.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentOutcome> {
    if plan.n_repeats == 0 {
        return Err(Error::InvalidConfig("n_repeats must be >= 1".into()));
    }
    if plan.n_bins < 2 {
        return Err(Error::InvalidConfig("n_bins must be >= 2".into()));
    }
    for pair in &plan.datasets {
        if pair.train.feature_names() != pair.test.feature_names() {
            return Err(Error::SchemaMismatch {
                dataset: pair.name.clone(),
                detail: format!(
                    "train has columns {:?}, test has {:?}",
                    pair.train.feature_names(),
                    pair.test.feature_names()
                ),
            });
        }
    }

    let mut outcome = ExperimentOutcome::default();
    for pair in &plan.datasets {
        for repeat in 0..plan.n_repeats {
            let repeat_seed = plan.base_seed.wrapping_add(repeat as u64);
            let train = pair.train.shuffle(repeat_seed);
            let test = pair.test.shuffle(repeat_seed);
            let bins = stratified_bins(&test, plan.n_bins, repeat_seed)?;
            for learner in &plan.learners {
                let config = TrainConfig {
                    seed: repeat_seed,
                    ..learner.config.clone()
                };
                let started = Instant::now();
                let model = match fit(learner.kind, &train, &config) {
                    Ok(m) => m,
                    Err(e) => {
                        outcome.failures.push(FitFailure {
                            dataset: pair.name.clone(),
                            learner: learner.name.clone(),
                            repeat,
                            error: e.to_string(),
                        });
                        continue;
                    }
                };
                let wall_time_seconds = started.elapsed().as_secs_f64();
                for bin in 0..plan.n_bins {
                    let fold = bins.extract(&test, bin);
                    let predictions = model.predict(&fold)?;
                    let scores = model.score(&fold)?;
                    let metrics =
                        MetricsRecord::evaluate(fold.labels(), &predictions, &scores)?;
                    outcome.records.push(RunRecord {
                        dataset: pair.name.clone(),
                        learner: learner.name.clone(),
                        repeat,
                        bin,
                        metrics,
                        wall_time_seconds,
                    });
                }
            }
        }
    }
    Ok(outcome)
}

/// Per-learner median/IQR summary for one metric, over the dataset-level
/// medians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerSummary {
    pub learner: String,
    pub metric: MetricKind,
    pub median: Option<f64>,
    pub iqr: Option<f64>,
}

/// Aggregated experiment results: one table per metric plus the per-learner
/// summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub tables: Vec<ResultTable>,
    pub summaries: Vec<LearnerSummary>,
}

impl Aggregate {
    pub fn table(&self, metric: MetricKind) -> &ResultTable {
        self.tables
            .iter()
            .find(|t| t.metric == metric)
            .expect("all three metric tables are always present")
    }
}

fn metric_value(metrics: &MetricsRecord, metric: MetricKind) -> Option<f64> {
    match metric {
        MetricKind::Recall => metrics.recall,
        MetricKind::FalseAlarm => metrics.false_alarm,
        MetricKind::Auc => metrics.auc,
    }
}

/// Aggregate records into the per-metric dataset x learner tables (median
/// over the repeat x bin cells) and per-learner medians/IQRs over datasets.
/// A metric undefined in every contributing cell propagates as undefined.
pub fn aggregate(records: &[RunRecord]) -> Result<Aggregate> {
    if records.is_empty() {
        return Err(Error::EmptyInput("run records"));
    }
    let mut datasets: Vec<String> = Vec::new();
    let mut learners: Vec<String> = Vec::new();
    for r in records {
        if !datasets.contains(&r.dataset) {
            datasets.push(r.dataset.clone());
        }
        if !learners.contains(&r.learner) {
            learners.push(r.learner.clone());
        }
    }

    let mut tables = Vec::new();
    let mut summaries = Vec::new();
    for metric in MetricKind::ALL {
        let mut cells: Vec<Vec<Option<f64>>> = Vec::with_capacity(datasets.len());
        for ds in &datasets {
            let mut row = Vec::with_capacity(learners.len());
            for learner in &learners {
                let values: Vec<f64> = records
                    .iter()
                    .filter(|r| &r.dataset == ds && &r.learner == learner)
                    .filter_map(|r| metric_value(&r.metrics, metric))
                    .collect();
                row.push(if values.is_empty() {
                    None
                } else {
                    Some(median_iqr(&values)?.0)
                });
            }
            cells.push(row);
        }
        let table = ResultTable {
            metric,
            rows: datasets.clone(),
            columns: learners.clone(),
            cells,
        };
        for (j, learner) in learners.iter().enumerate() {
            let column: Vec<f64> = table.cells.iter().filter_map(|row| row[j]).collect();
            let (median, iqr) = if column.is_empty() {
                (None, None)
            } else {
                let (m, i) = median_iqr(&column)?;
                (Some(m), Some(i))
            };
            summaries.push(LearnerSummary {
                learner: learner.clone(),
                metric,
                median,
                iqr,
            });
        }
        tables.push(table);
    }
    Ok(Aggregate { tables, summaries })
}

/// Mean fit wall time per learner, a qualitative runtime comparison.
pub fn mean_fit_seconds(records: &[RunRecord]) -> Vec<(String, f64)> {
    let mut learners: Vec<String> = Vec::new();
    for r in records {
        if !learners.contains(&r.learner) {
            learners.push(r.learner.clone());
        }
    }
    learners
        .into_iter()
        .map(|learner| {
            // one fit covers n_bins records; average over distinct fits
            let mut total = 0.0;
            let mut fits = 0usize;
            for r in records.iter().filter(|r| r.learner == learner) {
                if r.bin == 0 {
                    total += r.wall_time_seconds;
                    fits += 1;
                }
            }
            (learner, if fits > 0 { total / fits as f64 } else { 0.0 })
        })
        .collect()
}

/// JSON-lines serialization of the records, one per line.
pub fn records_to_jsonl(records: &[RunRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn records_from_jsonl(text: &str) -> Result<Vec<RunRecord>> {
    let mut records = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        records.push(serde_json::from_str(line)?);
    }
    Ok(records)
}

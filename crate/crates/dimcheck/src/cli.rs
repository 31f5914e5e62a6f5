//! Command-line workflows. Each command resolves its flags, runs the library
//! path, writes its outputs under `--out-dir`, and records every resolved
//! flag in `manifest.json`, so a run is reproducible from the manifest alone.
//!
//! Layout per run: `manifest.json`, plus per command
//! - `dim`:    `estimate.json`, `curves/<dataset>.csv`
//! - `synth`:  `<dataset>.csv`
//! - `verify`: `verification.csv`, `verification_summary.csv`
//! - `bench`:  `records.jsonl`, `tables/metric_{recall,pf,auc}.csv`
//! - `report`: `tables/metric_*.csv`, `tables/metric_*_winners.csv`, `report.txt`

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::dataset::{self, SyntheticKind, SyntheticSpec};
use crate::error::{Error, Result};
use crate::intrinsic::{
    estimate_dimension, export_curve, EstimateSummary, EstimatorConfig, Norm,
};
use crate::learners::{LearnerKind, TrainConfig};
use crate::rig::{
    aggregate, mean_fit_seconds, records_from_jsonl, records_to_jsonl, run_experiment,
    DatasetPair, ExperimentPlan, LearnerSpec,
};
use crate::stats::{
    cohens_threshold, mark_winners, render_text, write_flags_csv, write_table_csv, MetricKind,
    ResultTable, DEFAULT_EFFECT_SIZE,
};

/// Intrinsic dimensionality toolkit: estimate how many latent dimensions a
/// tabular dataset really has, and benchmark classical learners against it.
#[derive(Debug, Parser)]
#[command(name = "dimcheck", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the intrinsic dimension of a CSV dataset.
    Dim(DimArgs),
    /// Generate a synthetic dataset CSV (uniform cube or embedded line).
    Synth(SynthArgs),
    /// Sweep uniform cubes of known dimension to verify the estimator.
    Verify(VerifyArgs),
    /// Train and evaluate learners on a train/test CSV pair.
    Bench(BenchArgs),
    /// Mark winners in benchmark records with Cohen's-d thresholds.
    Report(ReportArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DimArgs {
    /// Input CSV (header row, one instance per row).
    pub input: PathBuf,
    /// Label column name or 0-based index.
    #[arg(long, default_value = "label")]
    pub label_col: String,
    /// Label value mapped to class 1.
    #[arg(long, default_value = "1")]
    pub positive_label: String,
    /// Distance norm: l1 or l2.
    #[arg(long, default_value = "l1")]
    pub norm: Norm,
    /// Number of radii in the schedule.
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Smoothing window over the slopes (odd).
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    /// Min-max scale features before computing distances.
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    /// cube or line.
    #[arg(long)]
    pub kind: SyntheticKindArg,
    /// Ambient dimension.
    #[arg(long)]
    pub dim: usize,
    /// Number of rows.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

/// Thin clap/serde wrapper around [`SyntheticKind`].
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticKindArg {
    Cube,
    Line,
}

impl std::str::FromStr for SyntheticKindArg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match SyntheticKind::from_str(s)? {
            SyntheticKind::UniformCube => Ok(SyntheticKindArg::Cube),
            SyntheticKind::EmbeddedLine => Ok(SyntheticKindArg::Line),
        }
    }
}

impl From<SyntheticKindArg> for SyntheticKind {
    fn from(v: SyntheticKindArg) -> Self {
        match v {
            SyntheticKindArg::Cube => SyntheticKind::UniformCube,
            SyntheticKindArg::Line => SyntheticKind::EmbeddedLine,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Cube dimensions to sweep.
    #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,20,40")]
    pub dims: Vec<usize>,
    /// Rows per cube.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Number of seeds per dimension.
    #[arg(long, default_value_t = 10)]
    pub seeds: usize,
    /// Base seed; draw i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "l1")]
    pub norm: Norm,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    pub train: PathBuf,
    pub test: PathBuf,
    #[arg(long, default_value = "label")]
    pub label_col: String,
    #[arg(long, default_value = "1")]
    pub positive_label: String,
    /// Comma-separated learners: tree, forest, svm, mlp, mlp-weighted.
    #[arg(long, value_delimiter = ',', default_value = "tree,forest,svm,mlp,mlp-weighted")]
    pub learners: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    #[arg(long, default_value_t = 5)]
    pub bins: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    /// records.jsonl produced by `bench`.
    pub records: PathBuf,
    /// Effect-size fraction multiplying the pooled standard deviation.
    #[arg(long, default_value_t = DEFAULT_EFFECT_SIZE)]
    pub d_fraction: f64,
    /// Pool for the threshold sigma: medians (table cells) or raw
    /// (record-level values).
    #[arg(long, default_value = "medians")]
    pub threshold_on: ThresholdPool,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdPool {
    Medians,
    Raw,
}

impl std::str::FromStr for ThresholdPool {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "medians" => Ok(ThresholdPool::Medians),
            "raw" => Ok(ThresholdPool::Raw),
            other => Err(Error::UnknownName {
                what: "threshold pool",
                value: other.to_string(),
                options: "medians, raw",
            }),
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dim(args) => cmd_dim(&args),
        Command::Synth(args) => cmd_synth(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Report(args) => cmd_report(&args),
    }
}

/// Print to stdout, tolerating a closed pipe (`dimcheck report | head`).
/// Commands only print after their file outputs are complete, so exiting
/// quietly here loses nothing.
fn emit(text: &str) {
    use std::io::Write;
    if std::io::stdout().write_all(text.as_bytes()).is_err() {
        std::process::exit(0);
    }
}

fn emit_line(text: &str) {
    emit(text);
    emit("\n");
}

#[derive(Serialize)]
struct Manifest<'a, T: Serialize> {
    command: &'a str,
    flags: &'a T,
    outputs: Vec<String>,
}

fn write_manifest<T: Serialize>(
    out_dir: &Path,
    command: &str,
    flags: &T,
    outputs: Vec<String>,
) -> Result<()> {
    let manifest = Manifest {
        command,
        flags,
        outputs,
    };
    let path = out_dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| Error::io(path, e))
}

fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

pub fn cmd_dim(args: &DimArgs) -> Result<()> {
    let data = dataset::load_csv(&args.input, &args.label_col, &args.positive_label)?;
    let config = EstimatorConfig {
        norm: args.norm,
        steps: args.steps,
        window: args.window,
        normalize: args.normalize,
        schedule: None,
    };
    let estimate = estimate_dimension(&data, &config)?;

    ensure_dir(&args.out_dir)?;
    let curves = args.out_dir.join("curves");
    ensure_dir(&curves)?;
    let curve_path = curves.join(format!("{}.csv", data.name()));
    export_curve(&estimate, &curve_path)?;

    let summary = EstimateSummary::new(data.name(), &config, &estimate);
    let summary_path = args.out_dir.join("estimate.json");
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    std::fs::write(&summary_path, text).map_err(|e| Error::io(&summary_path, e))?;

    write_manifest(
        &args.out_dir,
        "dim",
        args,
        vec![
            "estimate.json".into(),
            format!("curves/{}.csv", data.name()),
        ],
    )?;
    emit_line(&format!(
        "{}: intrinsic dimension = {:.4} ({} usable radii, norm {})",
        data.name(),
        estimate.value,
        estimate.usable_points,
        args.norm
    ));
    Ok(())
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let spec = SyntheticSpec {
        kind: args.kind.into(),
        ambient_dim: args.dim,
        n_samples: args.samples,
        seed: args.seed,
    };
    let data = dataset::generate(&spec)?;
    ensure_dir(&args.out_dir)?;
    let csv_path = args.out_dir.join(format!("{}.csv", data.name()));
    data.write_csv(&csv_path)?;
    write_manifest(
        &args.out_dir,
        "synth",
        args,
        vec![format!("{}.csv", data.name())],
    )?;
    emit_line(&format!(
        "wrote {} ({} rows x {} features)",
        csv_path.display(),
        data.n_rows(),
        data.n_features()
    ));
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    if args.dims.is_empty() {
        return Err(Error::EmptyInput("dims"));
    }
    let config = EstimatorConfig {
        norm: args.norm,
        steps: args.steps,
        window: args.window,
        normalize: false,
        schedule: None,
    };
    ensure_dir(&args.out_dir)?;

    let mut detail = String::from("dim,seed,estimate\n");
    let mut summary = String::from("dim,mean_estimate\n");
    let mut lines = vec![format!(
        "dim  mean_estimate  (over {} seeds, s={})",
        args.seeds, args.samples
    )];
    for &dim in &args.dims {
        let mut total = 0.0;
        for i in 0..args.seeds {
            let seed = args.seed + i as u64;
            let spec = SyntheticSpec {
                kind: SyntheticKind::UniformCube,
                ambient_dim: dim,
                n_samples: args.samples,
                seed,
            };
            let data = dataset::generate(&spec)?;
            let estimate = estimate_dimension(&data, &config)?;
            detail.push_str(&format!("{dim},{seed},{}\n", estimate.value));
            total += estimate.value;
        }
        let mean = total / args.seeds as f64;
        summary.push_str(&format!("{dim},{mean}\n"));
        lines.push(format!("{dim:>3}  {mean:>13.3}"));
    }

    let detail_path = args.out_dir.join("verification.csv");
    std::fs::write(&detail_path, detail).map_err(|e| Error::io(&detail_path, e))?;
    let summary_path = args.out_dir.join("verification_summary.csv");
    std::fs::write(&summary_path, summary).map_err(|e| Error::io(&summary_path, e))?;
    write_manifest(
        &args.out_dir,
        "verify",
        args,
        vec!["verification.csv".into(), "verification_summary.csv".into()],
    )?;
    for line in lines {
        emit_line(&line);
    }
    Ok(())
}

/// Resolve a learner column name from the CLI into a rig spec.
pub fn parse_learner(name: &str, seed: u64) -> Result<LearnerSpec> {
    let base = TrainConfig {
        seed,
        ..TrainConfig::default()
    };
    let (kind, weighted) = match name {
        "tree" => (LearnerKind::DecisionTree, false),
        "forest" => (LearnerKind::RandomForest, false),
        "svm" => (LearnerKind::LinearSvm, false),
        "mlp" => (LearnerKind::Mlp, false),
        "mlp-weighted" => (LearnerKind::Mlp, true),
        other => {
            return Err(Error::UnknownName {
                what: "learner",
                value: other.to_string(),
                options: "tree, forest, svm, mlp, mlp-weighted",
            })
        }
    };
    Ok(LearnerSpec::new(
        name,
        kind,
        TrainConfig {
            class_weighted: weighted,
            ..base
        },
    ))
}

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let train = dataset::load_csv(&args.train, &args.label_col, &args.positive_label)?;
    let test = dataset::load_csv(&args.test, &args.label_col, &args.positive_label)?;
    let name = train.name().trim_end_matches("_train").to_string();
    let learners: Vec<LearnerSpec> = args
        .learners
        .iter()
        .map(|l| parse_learner(l, args.seed))
        .collect::<Result<_>>()?;
    let plan = ExperimentPlan {
        datasets: vec![DatasetPair { name, train, test }],
        learners,
        n_repeats: args.repeats,
        n_bins: args.bins,
        base_seed: args.seed,
    };
    let outcome = run_experiment(&plan)?;

    ensure_dir(&args.out_dir)?;
    let records_path = args.out_dir.join("records.jsonl");
    std::fs::write(&records_path, records_to_jsonl(&outcome.records)?)
        .map_err(|e| Error::io(&records_path, e))?;

    let tables_dir = args.out_dir.join("tables");
    ensure_dir(&tables_dir)?;
    let agg = aggregate(&outcome.records)?;
    let mut outputs = vec!["records.jsonl".to_string()];
    for table in &agg.tables {
        let file = format!("tables/metric_{}.csv", table.metric.file_stem());
        write_table_csv(table, &args.out_dir.join(&file))?;
        outputs.push(file);
    }
    write_manifest(&args.out_dir, "bench", args, outputs)?;

    for failure in &outcome.failures {
        eprintln!(
            "warning: {} repeat {} on {}: {}",
            failure.learner, failure.repeat, failure.dataset, failure.error
        );
    }
    emit_line(&format!(
        "{} records written ({} learner fits failed)",
        outcome.records.len(),
        outcome.failures.len()
    ));
    for summary in &agg.summaries {
        if let (Some(m), Some(iqr)) = (summary.median, summary.iqr) {
            emit_line(&format!(
                "{:<14} {:<12} median {:.3}  iqr {:.3}",
                summary.learner,
                summary.metric.to_string(),
                m,
                iqr
            ));
        }
    }
    emit_line("mean fit seconds:");
    for (learner, secs) in mean_fit_seconds(&outcome.records) {
        emit_line(&format!("  {learner:<14} {secs:.3}"));
    }
    Ok(())
}

pub fn cmd_report(args: &ReportArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.records).map_err(|e| Error::io(&args.records, e))?;
    let records = records_from_jsonl(&text)?;
    if records.is_empty() {
        return Err(Error::EmptyInput("records file"));
    }
    let agg = aggregate(&records)?;

    ensure_dir(&args.out_dir)?;
    let tables_dir = args.out_dir.join("tables");
    ensure_dir(&tables_dir)?;

    let mut report = String::new();
    let mut outputs = Vec::new();
    for table in &agg.tables {
        let threshold = threshold_for(table, &records, args)?;
        let marking = mark_winners(table, threshold, table.metric.direction())?;
        report.push_str(&render_text(table, &marking));
        report.push('\n');

        let stem = table.metric.file_stem();
        let cells_file = format!("tables/metric_{stem}.csv");
        write_table_csv(table, &args.out_dir.join(&cells_file))?;
        let flags_file = format!("tables/metric_{stem}_winners.csv");
        write_flags_csv(table, &marking, &args.out_dir.join(&flags_file))?;
        outputs.push(cells_file);
        outputs.push(flags_file);
    }

    let report_path = args.out_dir.join("report.txt");
    std::fs::write(&report_path, &report).map_err(|e| Error::io(&report_path, e))?;
    outputs.push("report.txt".into());
    write_manifest(&args.out_dir, "report", args, outputs)?;
    emit(&report);
    Ok(())
}

fn threshold_for(table: &ResultTable, records: &[crate::rig::RunRecord], args: &ReportArgs) -> Result<f64> {
    let pool: Vec<f64> = match args.threshold_on {
        ThresholdPool::Medians => table.defined_cells(),
        ThresholdPool::Raw => records
            .iter()
            .filter_map(|r| match table.metric {
                MetricKind::Recall => r.metrics.recall,
                MetricKind::FalseAlarm => r.metrics.false_alarm,
                MetricKind::Auc => r.metrics.auc,
            })
            .collect(),
    };
    match cohens_threshold(&pool, args.d_fraction) {
        Ok(t) => Ok(t),
        Err(Error::TooFewValues { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

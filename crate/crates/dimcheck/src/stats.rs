//! Winner analysis for learner comparison tables: Cohen's-d "close to"
//! thresholds, per-row winner marking, and median/IQR aggregation.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which evaluation measure a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Recall,
    FalseAlarm,
    Auc,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [MetricKind::Recall, MetricKind::FalseAlarm, MetricKind::Auc];

    /// Higher recall/AUC is better; lower false alarm is better.
    pub fn direction(self) -> Direction {
        match self {
            MetricKind::FalseAlarm => Direction::Minimize,
            _ => Direction::Maximize,
        }
    }

    /// Short stem used in output file names.
    pub fn file_stem(self) -> &'static str {
        match self {
            MetricKind::Recall => "recall",
            MetricKind::FalseAlarm => "pf",
            MetricKind::Auc => "auc",
        }
    }
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricKind::Recall => write!(f, "recall"),
            MetricKind::FalseAlarm => write!(f, "false_alarm"),
            MetricKind::Auc => write!(f, "auc"),
        }
    }
}

/// Optimization sense for winner marking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Maximize,
    Minimize,
}

/// A dataset x learner grid of median metric values. Cells that could not be
/// computed (metric undefined in every contributing run) are None.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metric: MetricKind,
    /// Dataset names, one per row.
    pub rows: Vec<String>,
    /// Learner names, one per column.
    pub columns: Vec<String>,
    pub cells: Vec<Vec<Option<f64>>>,
}

impl ResultTable {
    /// Every defined cell, flattened row-major.
    pub fn defined_cells(&self) -> Vec<f64> {
        self.cells.iter().flatten().filter_map(|c| *c).collect()
    }
}

/// Per-cell winner flags for one table: a cell wins when it lies within
/// `threshold` of its row's best value, boundary inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinnerMarking {
    pub threshold: f64,
    pub direction: Direction,
    pub winners: Vec<Vec<bool>>,
}

/// The effect-size fraction splitting the difference between "small" (0.2)
/// and "medium" (0.5) effects.
pub const DEFAULT_EFFECT_SIZE: f64 = 0.35;

/// Sameness threshold for one metric: `d_fraction` times the sample standard
/// deviation (n-1 denominator) of every cell of that metric, pooled across
/// the whole table.
pub fn cohens_threshold(values: &[f64], d_fraction: f64) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::TooFewValues {
            needed: 2,
            got: values.len(),
        });
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(d_fraction * var.sqrt())
}

/// Mark the winners of every row. Undefined cells never win; a row whose
/// cells are all undefined has no winners.
pub fn mark_winners(
    table: &ResultTable,
    threshold: f64,
    direction: Direction,
) -> Result<WinnerMarking> {
    if table.rows.is_empty() || table.columns.is_empty() {
        return Err(Error::EmptyInput("result table"));
    }
    let mut winners = Vec::with_capacity(table.cells.len());
    for row in &table.cells {
        let best = match direction {
            Direction::Maximize => row
                .iter()
                .filter_map(|c| *c)
                .fold(f64::NEG_INFINITY, f64::max),
            Direction::Minimize => row.iter().filter_map(|c| *c).fold(f64::INFINITY, f64::min),
        };
        let flags: Vec<bool> = row
            .iter()
            .map(|cell| match cell {
                Some(v) => match direction {
                    Direction::Maximize => *v >= best - threshold,
                    Direction::Minimize => *v <= best + threshold,
                },
                None => false,
            })
            .collect();
        winners.push(flags);
    }
    Ok(WinnerMarking {
        threshold,
        direction,
        winners,
    })
}

/// Median and interquartile range using linear-interpolation quantiles.
pub fn median_iqr(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptyInput("median_iqr"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q = |p: f64| -> f64 {
        let pos = p * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    };
    Ok((q(0.5), q(0.75) - q(0.25)))
}

/// Text rendering of a table with winners bracketed, one dataset per row.
pub fn render_text(table: &ResultTable, marking: &WinnerMarking) -> String {
    let col_width = table
        .columns
        .iter()
        .map(|c| c.len())
        .max()
        .unwrap_or(0)
        .max(9);
    let row_width = table.rows.iter().map(|r| r.len()).max().unwrap_or(0).max(7);

    let mut out = format!(
        "{} (threshold {:.4}, {})\n",
        table.metric,
        marking.threshold,
        match marking.direction {
            Direction::Maximize => "maximize",
            Direction::Minimize => "minimize",
        }
    );
    out.push_str(&format!("{:row_width$}", ""));
    for c in &table.columns {
        out.push_str(&format!(" {c:>col_width$}"));
    }
    out.push('\n');
    for (i, name) in table.rows.iter().enumerate() {
        out.push_str(&format!("{name:row_width$}"));
        for (j, cell) in table.cells[i].iter().enumerate() {
            let text = match cell {
                Some(v) if marking.winners[i][j] => format!("[{v:.3}]"),
                Some(v) => format!(" {v:.3} "),
                None => " -     ".to_string(),
            };
            out.push_str(&format!(" {text:>col_width$}"));
        }
        out.push('\n');
    }
    out
}

/// CSV of the table cells (empty cell for undefined values).
pub fn table_csv(table: &ResultTable) -> String {
    let mut out = String::from("dataset");
    for c in &table.columns {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for (i, name) in table.rows.iter().enumerate() {
        out.push_str(name);
        for cell in &table.cells[i] {
            out.push(',');
            if let Some(v) = cell {
                out.push_str(&v.to_string());
            }
        }
        out.push('\n');
    }
    out
}

/// Parallel CSV of 0/1 winner flags.
pub fn flags_csv(table: &ResultTable, marking: &WinnerMarking) -> String {
    let mut out = String::from("dataset");
    for c in &table.columns {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for (i, name) in table.rows.iter().enumerate() {
        out.push_str(name);
        for &flag in &marking.winners[i] {
            out.push(',');
            out.push(if flag { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn write_table_csv(table: &ResultTable, path: &Path) -> Result<()> {
    std::fs::write(path, table_csv(table)).map_err(|e| Error::io(path, e))
}

pub fn write_flags_csv(table: &ResultTable, marking: &WinnerMarking, path: &Path) -> Result<()> {
    std::fs::write(path, flags_csv(table, marking)).map_err(|e| Error::io(path, e))
}

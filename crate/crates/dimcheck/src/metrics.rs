//! Evaluation measures: recall, false alarm, and rank-based AUC.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Confusion counts with class 1 as positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.true_positives + self.false_positives + self.true_negatives + self.false_negatives
    }

    /// tp / (tp + fn); None when there are no actual positives. A silent 0
    /// or 1 here would corrupt aggregate tables, so the degenerate case is
    /// explicit.
    pub fn recall(&self) -> Option<f64> {
        let denom = self.true_positives + self.false_negatives;
        (denom > 0).then(|| self.true_positives as f64 / denom as f64)
    }

    /// fp / (fp + tn); None when there are no actual negatives.
    pub fn false_alarm(&self) -> Option<f64> {
        let denom = self.false_positives + self.true_negatives;
        (denom > 0).then(|| self.false_positives as f64 / denom as f64)
    }
}

/// Count the confusion cells for a prediction vector.
pub fn confusion(labels: &[u8], predictions: &[u8]) -> Result<Confusion> {
    if labels.len() != predictions.len() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: predictions.len(),
        });
    }
    if labels.is_empty() {
        return Err(Error::EmptyInput("confusion"));
    }
    let mut c = Confusion {
        true_positives: 0,
        false_positives: 0,
        true_negatives: 0,
        false_negatives: 0,
    };
    for (&y, &p) in labels.iter().zip(predictions) {
        match (y, p) {
            (1, 1) => c.true_positives += 1,
            (0, 1) => c.false_positives += 1,
            (0, 0) => c.true_negatives += 1,
            _ => c.false_negatives += 1,
        }
    }
    Ok(c)
}

/// Area under the ROC curve via the rank-sum formulation: the probability
/// that a uniformly random positive outscores a uniformly random negative,
/// ties counting one half. Exact and threshold-free.
pub fn auc(labels: &[u8], scores: &[f64]) -> Result<f64> {
    if labels.len() != scores.len() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: scores.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::AucUndefined);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // average ranks over tie groups, 1-based
    let mut rank_sum_pos = 0.0f64;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if labels[idx] == 1 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }

    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Metrics for one evaluation cell. Undefined values (degenerate
/// denominators, single-class AUC input) are carried as None.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub recall: Option<f64>,
    pub false_alarm: Option<f64>,
    pub auc: Option<f64>,
    #[serde(flatten)]
    pub confusion: Confusion,
}

impl MetricsRecord {
    pub fn new(confusion: Confusion, auc: Option<f64>) -> Self {
        MetricsRecord {
            recall: confusion.recall(),
            false_alarm: confusion.false_alarm(),
            auc,
            confusion,
        }
    }

    /// Evaluate predictions and scores against true labels in one shot.
    pub fn evaluate(labels: &[u8], predictions: &[u8], scores: &[f64]) -> Result<Self> {
        let c = confusion(labels, predictions)?;
        let a = match auc(labels, scores) {
            Ok(v) => Some(v),
            Err(Error::AucUndefined) => None,
            Err(e) => return Err(e),
        };
        Ok(MetricsRecord::new(c, a))
    }
}

//! Linear SVM trained by deterministic epoch-based subgradient descent on the
//! L2-regularized hinge loss (Pegasos-style steps 1/(lambda t), lambda =
//! 1/(C N)). Instances are visited in a fixed order each epoch, so the solver
//! involves no randomness at all; training stops on an objective plateau.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;

use super::{ClassWeights, SvmParams, TrainConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Solver hyperparameters and loss weights, recorded for provenance.
    #[serde(default)]
    params: SvmParams,
    #[serde(default = "ClassWeights::uniform")]
    class_weights: ClassWeights,
    #[serde(default)]
    training_log: Vec<f64>,
}

impl LinearSvm {
    pub fn fit(data: &Dataset, config: &TrainConfig) -> Self {
        let n = data.n_rows();
        let f = data.n_features();
        let lambda = 1.0 / (config.params.svm.c * n as f64);
        let class_weights = ClassWeights::from_config(config.class_weighted, data.labels())
            .unwrap_or_else(|_| ClassWeights::uniform());

        let mut w = vec![0.0f64; f];
        let mut b = 0.0f64;
        let mut t = 0u64;
        let mut log = Vec::new();
        let mut best = f64::INFINITY;
        let mut stale = 0usize;

        for _epoch in 0..config.params.svm.max_epochs {
            for i in 0..n {
                t += 1;
                let eta = 1.0 / (lambda * t as f64);
                let row = data.row(i);
                let y = if data.labels()[i] == 1 { 1.0 } else { -1.0 };
                let margin = y * (dot(&w, row) + b);
                // bias rides along as a constant feature, inside the L2 term:
                // the shrink makes the iterates forget the large early steps
                let shrink = 1.0 - eta * lambda;
                for v in &mut w {
                    *v *= shrink;
                }
                b *= shrink;
                if margin < 1.0 {
                    let step = eta * class_weights.weight_of(data.labels()[i]) * y;
                    for (wv, &x) in w.iter_mut().zip(row) {
                        *wv += step * x;
                    }
                    b += step;
                }
            }
            let objective = hinge_objective(data, &w, b, lambda, &class_weights);
            log.push(objective);
            if objective < best {
                best = objective;
                stale = 0;
            } else {
                stale += 1;
                if stale >= config.patience {
                    break;
                }
            }
        }

        LinearSvm {
            weights: w,
            bias: b,
            params: config.params.svm.clone(),
            class_weights,
            training_log: log,
        }
    }

    /// Build a model directly from learned parameters.
    pub fn from_parts(weights: Vec<f64>, bias: f64) -> Self {
        LinearSvm {
            weights,
            bias,
            params: SvmParams::default(),
            class_weights: ClassWeights::uniform(),
            training_log: Vec::new(),
        }
    }

    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    /// Signed margin w.x + b.
    pub fn score_row(&self, row: &[f64]) -> f64 {
        dot(&self.weights, row) + self.bias
    }

    pub fn training_log(&self) -> &[f64] {
        &self.training_log
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn hinge_objective(
    data: &Dataset,
    w: &[f64],
    b: f64,
    lambda: f64,
    class_weights: &ClassWeights,
) -> f64 {
    let reg = 0.5 * lambda * (dot(w, w) + b * b);
    let hinge: f64 = data
        .rows()
        .zip(data.labels())
        .map(|(row, &label)| {
            let y = if label == 1 { 1.0 } else { -1.0 };
            class_weights.weight_of(label) * (1.0 - y * (dot(w, row) + b)).max(0.0)
        })
        .sum();
    reg + hinge / data.n_rows() as f64
}

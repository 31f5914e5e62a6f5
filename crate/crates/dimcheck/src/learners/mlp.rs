//! Fully connected network: ReLU hidden layers, a 2-unit softmax output, and
//! a (optionally class-weighted) cross-entropy loss, trained with mini-batch
//! gradient descent using Adam-style adaptive steps. Dropout is applied
//! between hidden layers during training only.
//!
//! The loss/gradient path is exposed so analytic gradients can be checked
//! against finite differences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

use super::{ClassWeights, MlpParams, TrainConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) struct DenseLayer {
    in_dim: usize,
    out_dim: usize,
    /// Row-major out_dim x in_dim.
    weights: Vec<f64>,
    biases: Vec<f64>,
}

impl DenseLayer {
    fn random(in_dim: usize, out_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let scale = (2.0 / in_dim as f64).sqrt();
        DenseLayer {
            in_dim,
            out_dim,
            weights: (0..in_dim * out_dim)
                .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
                .collect(),
            biases: vec![0.0; out_dim],
        }
    }

    /// out[b] = W a[b] + bias for every row of the batch.
    fn forward(&self, input: &[f64], batch: usize, out: &mut Vec<f64>) {
        out.clear();
        out.reserve(batch * self.out_dim);
        for b in 0..batch {
            let row = &input[b * self.in_dim..(b + 1) * self.in_dim];
            for o in 0..self.out_dim {
                let w = &self.weights[o * self.in_dim..(o + 1) * self.in_dim];
                let z: f64 = self.biases[o] + w.iter().zip(row).map(|(wv, x)| wv * x).sum::<f64>();
                out.push(z);
            }
        }
    }
}

#[derive(Debug, Clone)]
struct LayerGrad {
    dw: Vec<f64>,
    db: Vec<f64>,
}

/// A trained network. Scores are the softmax probability of class 1.
/// The layer dimensions describe the architecture; `params` records the
/// training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    layers: Vec<DenseLayer>,
    #[serde(default)]
    params: MlpParams,
    #[serde(default = "ClassWeights::uniform")]
    class_weights: ClassWeights,
    #[serde(default)]
    training_log: Vec<f64>,
}

impl Mlp {
    /// Freshly initialized network: `hidden_sizes` ReLU layers followed by a
    /// 2-unit softmax output. Weights are seeded; biases start at zero.
    pub fn random(n_inputs: usize, hidden_sizes: &[usize], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layers = Vec::with_capacity(hidden_sizes.len() + 1);
        let mut prev = n_inputs;
        for &h in hidden_sizes {
            layers.push(DenseLayer::random(prev, h, &mut rng));
            prev = h;
        }
        layers.push(DenseLayer::random(prev, 2, &mut rng));
        Mlp {
            layers,
            params: MlpParams::default(),
            class_weights: ClassWeights::uniform(),
            training_log: Vec::new(),
        }
    }

    pub fn n_features(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn training_log(&self) -> &[f64] {
        &self.training_log
    }

    /// Softmax output for one row; the two entries sum to 1.
    pub fn probabilities_row(&self, row: &[f64]) -> [f64; 2] {
        let mut current = row.to_vec();
        let mut next = Vec::new();
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            layer.forward(&current, 1, &mut next);
            if l < last {
                for v in &mut next {
                    *v = v.max(0.0);
                }
            }
            std::mem::swap(&mut current, &mut next);
        }
        softmax2(current[0], current[1])
    }

    pub fn score_row(&self, row: &[f64]) -> f64 {
        self.probabilities_row(row)[1]
    }

    /// All weights and biases flattened, layer by layer.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for layer in &self.layers {
            out.extend_from_slice(&layer.weights);
            out.extend_from_slice(&layer.biases);
        }
        out
    }

    pub fn set_params(&mut self, params: &[f64]) {
        let mut k = 0;
        for layer in &mut self.layers {
            let nw = layer.weights.len();
            layer.weights.copy_from_slice(&params[k..k + nw]);
            k += nw;
            let nb = layer.biases.len();
            layer.biases.copy_from_slice(&params[k..k + nb]);
            k += nb;
        }
        debug_assert_eq!(k, params.len());
    }

    /// Weighted cross-entropy over a flat row-major batch, dropout disabled.
    pub fn loss(&self, features: &[f64], batch: usize, labels: &[u8], cw: &ClassWeights) -> f64 {
        self.forward_backward(features, batch, labels, cw, None, false)
            .0
    }

    /// Loss plus the analytic gradient, flattened in [`Mlp::params`] order.
    pub fn loss_gradient(
        &self,
        features: &[f64],
        batch: usize,
        labels: &[u8],
        cw: &ClassWeights,
    ) -> (f64, Vec<f64>) {
        let (loss, grads) = self.forward_backward(features, batch, labels, cw, None, true);
        let grads = grads.expect("gradients requested");
        let mut flat = Vec::new();
        for g in &grads {
            flat.extend_from_slice(&g.dw);
            flat.extend_from_slice(&g.db);
        }
        (loss, flat)
    }

    /// One forward pass and (optionally) the matching backward pass.
    /// `masks`, when given, holds one inverted-dropout mask per gap between
    /// hidden layers, each batch x units.
    fn forward_backward(
        &self,
        features: &[f64],
        batch: usize,
        labels: &[u8],
        cw: &ClassWeights,
        masks: Option<&[Vec<f64>]>,
        want_grads: bool,
    ) -> (f64, Option<Vec<LayerGrad>>) {
        let n_layers = self.layers.len();
        let n_hidden = n_layers - 1;

        // forward: keep each layer's input (post-relu, post-dropout)
        let mut inputs: Vec<Vec<f64>> = Vec::with_capacity(n_layers);
        inputs.push(features.to_vec());
        let mut logits = Vec::new();
        for (l, layer) in self.layers.iter().enumerate() {
            let mut z = Vec::new();
            layer.forward(&inputs[l], batch, &mut z);
            if l == n_layers - 1 {
                logits = z;
            } else {
                for v in &mut z {
                    *v = v.max(0.0);
                }
                if l < n_hidden - 1 {
                    if let Some(masks) = masks {
                        for (v, m) in z.iter_mut().zip(&masks[l]) {
                            *v *= m;
                        }
                    }
                }
                inputs.push(z);
            }
        }

        let mut loss = 0.0;
        let mut dlogits = vec![0.0; batch * 2];
        for b in 0..batch {
            let p = softmax2(logits[b * 2], logits[b * 2 + 1]);
            let y = labels[b] as usize;
            let w = cw.weight_of(labels[b]);
            // f64::max would swallow a NaN probability, hiding a diverged fit
            let clamped = if p[y].is_nan() {
                f64::NAN
            } else {
                p[y].max(f64::MIN_POSITIVE)
            };
            loss -= w * clamped.ln();
            if want_grads {
                let scale = w / batch as f64;
                dlogits[b * 2] = scale * (p[0] - if y == 0 { 1.0 } else { 0.0 });
                dlogits[b * 2 + 1] = scale * (p[1] - if y == 1 { 1.0 } else { 0.0 });
            }
        }
        loss /= batch as f64;
        if !want_grads {
            return (loss, None);
        }

        let mut grads: Vec<LayerGrad> = self
            .layers
            .iter()
            .map(|l| LayerGrad {
                dw: vec![0.0; l.weights.len()],
                db: vec![0.0; l.biases.len()],
            })
            .collect();

        let mut dout = dlogits;
        for l in (0..n_layers).rev() {
            let layer = &self.layers[l];
            let input = &inputs[l];
            let g = &mut grads[l];
            for b in 0..batch {
                let drow = &dout[b * layer.out_dim..(b + 1) * layer.out_dim];
                let irow = &input[b * layer.in_dim..(b + 1) * layer.in_dim];
                for (o, &d) in drow.iter().enumerate() {
                    g.db[o] += d;
                    let wrow = &mut g.dw[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (dwv, &x) in wrow.iter_mut().zip(irow) {
                        *dwv += d * x;
                    }
                }
            }
            if l == 0 {
                break;
            }
            // propagate to the previous layer's output
            let mut dprev = vec![0.0; batch * layer.in_dim];
            for b in 0..batch {
                let drow = &dout[b * layer.out_dim..(b + 1) * layer.out_dim];
                let prow = &mut dprev[b * layer.in_dim..(b + 1) * layer.in_dim];
                for (o, &d) in drow.iter().enumerate() {
                    let wrow = &layer.weights[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (pv, &wv) in prow.iter_mut().zip(wrow) {
                        *pv += d * wv;
                    }
                }
            }
            // back through dropout: inputs[l] was scaled by masks[l-1]
            if l < n_hidden {
                if let Some(masks) = masks {
                    for (dv, m) in dprev.iter_mut().zip(&masks[l - 1]) {
                        *dv *= m;
                    }
                }
            }
            // relu gate: inputs[l] is zero exactly where the unit was
            // inactive or dropped
            for (dv, &a) in dprev.iter_mut().zip(inputs[l].iter()) {
                if a == 0.0 {
                    *dv = 0.0;
                }
            }
            dout = dprev;
        }

        (loss, Some(grads))
    }

    /// Train with mini-batch Adam and early stopping on the full-set
    /// training loss.
    pub fn fit(data: &Dataset, config: &TrainConfig) -> Result<Self> {
        let params = &config.params.mlp;
        let cw = ClassWeights::from_config(config.class_weighted, data.labels())?;
        let hidden: Vec<usize> = vec![params.hidden_units; params.hidden_layers];
        let mut mlp = Mlp::random(data.n_features(), &hidden, config.seed);
        mlp.params = params.clone();
        mlp.class_weights = cw;
        let mut dropout_rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_d40b);
        let mut adam = Adam::new(&mlp.layers, params.learning_rate);

        let n = data.n_rows();
        let flat: Vec<f64> = data.rows().flat_map(|r| r.iter().copied()).collect();
        let f = data.n_features();
        let n_gaps = params.hidden_layers.saturating_sub(1);
        let keep = 1.0 - params.dropout;

        let mut best = f64::INFINITY;
        let mut stale = 0usize;
        for epoch in 1..=config.max_epochs {
            let mut start = 0;
            while start < n {
                let end = (start + params.batch_size).min(n);
                let batch = end - start;
                let feats = &flat[start * f..end * f];
                let labels = &data.labels()[start..end];
                let masks: Option<Vec<Vec<f64>>> = (params.dropout > 0.0 && n_gaps > 0).then(|| {
                    (0..n_gaps)
                        .map(|_| {
                            (0..batch * params.hidden_units)
                                .map(|_| {
                                    if dropout_rng.gen::<f64>() < keep {
                                        1.0 / keep
                                    } else {
                                        0.0
                                    }
                                })
                                .collect()
                        })
                        .collect()
                });
                let (_, grads) =
                    mlp.forward_backward(feats, batch, labels, &cw, masks.as_deref(), true);
                adam.step(&mut mlp.layers, &grads.expect("gradients requested"));
                start = end;
            }

            let epoch_loss = mlp.loss(&flat, n, data.labels(), &cw);
            if !epoch_loss.is_finite() {
                return Err(Error::NonFiniteLoss { epoch });
            }
            mlp.training_log.push(epoch_loss);
            if epoch_loss < best {
                best = epoch_loss;
                stale = 0;
            } else {
                stale += 1;
                if stale >= config.patience {
                    break;
                }
            }
        }
        Ok(mlp)
    }
}

fn softmax2(a: f64, b: f64) -> [f64; 2] {
    let m = a.max(b);
    let ea = (a - m).exp();
    let eb = (b - m).exp();
    [ea / (ea + eb), eb / (ea + eb)]
}

struct Adam {
    lr: f64,
    t: u64,
    m: Vec<LayerGrad>,
    v: Vec<LayerGrad>,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(layers: &[DenseLayer], lr: f64) -> Self {
        let zeros = |l: &DenseLayer| LayerGrad {
            dw: vec![0.0; l.weights.len()],
            db: vec![0.0; l.biases.len()],
        };
        Adam {
            lr,
            t: 0,
            m: layers.iter().map(zeros).collect(),
            v: layers.iter().map(zeros).collect(),
        }
    }

    fn step(&mut self, layers: &mut [DenseLayer], grads: &[LayerGrad]) {
        self.t += 1;
        let bc1 = 1.0 - Self::BETA1.powi(self.t as i32);
        let bc2 = 1.0 - Self::BETA2.powi(self.t as i32);
        for (l, layer) in layers.iter_mut().enumerate() {
            update(
                &mut layer.weights,
                &grads[l].dw,
                &mut self.m[l].dw,
                &mut self.v[l].dw,
                self.lr,
                bc1,
                bc2,
            );
            update(
                &mut layer.biases,
                &grads[l].db,
                &mut self.m[l].db,
                &mut self.v[l].db,
                self.lr,
                bc1,
                bc2,
            );
        }

        fn update(
            params: &mut [f64],
            g: &[f64],
            m: &mut [f64],
            v: &mut [f64],
            lr: f64,
            bc1: f64,
            bc2: f64,
        ) {
            for i in 0..params.len() {
                m[i] = Adam::BETA1 * m[i] + (1.0 - Adam::BETA1) * g[i];
                v[i] = Adam::BETA2 * v[i] + (1.0 - Adam::BETA2) * g[i] * g[i];
                let mhat = m[i] / bc1;
                let vhat = v[i] / bc2;
                params[i] -= lr * mhat / (vhat.sqrt() + Adam::EPS);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::two_gaussian_blobs;

    fn flat_features(data: &Dataset) -> Vec<f64> {
        data.rows().flat_map(|r| r.iter().copied()).collect()
    }

    #[test]
    fn softmax_outputs_sum_to_one() {
        let mlp = Mlp::random(3, &[5, 5], 7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let row: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
            let p = mlp.probabilities_row(&row);
            assert!((p[0] + p[1] - 1.0).abs() < 1e-9);
            assert!((0.0..=1.0).contains(&p[0]));
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let batch = 10;
        let n_inputs = 4;
        let features: Vec<f64> = (0..batch * n_inputs)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let labels: Vec<u8> = (0..batch).map(|b| (b % 2) as u8).collect();
        let cw = ClassWeights {
            positive: 2.5,
            negative: 1.0,
        };

        let mut mlp = Mlp::random(n_inputs, &[5, 5], 17);
        let (_, analytic) = mlp.loss_gradient(&features, batch, &labels, &cw);
        let base = mlp.params();
        let h = 1e-5;
        let mut max_rel = 0.0f64;
        for k in 0..base.len() {
            let mut plus = base.clone();
            plus[k] += h;
            mlp.set_params(&plus);
            let lp = mlp.loss(&features, batch, &labels, &cw);
            let mut minus = base.clone();
            minus[k] -= h;
            mlp.set_params(&minus);
            let lm = mlp.loss(&features, batch, &labels, &cw);
            let numeric = (lp - lm) / (2.0 * h);
            let rel = (analytic[k] - numeric).abs() / analytic[k].abs().max(numeric.abs()).max(1e-8);
            max_rel = max_rel.max(rel);
        }
        mlp.set_params(&base);
        assert!(max_rel < 1e-4, "max relative gradient error {max_rel}");
    }

    #[test]
    fn fit_learns_the_blobs() {
        let data = two_gaussian_blobs(200, 0.3, 5).unwrap();
        let mlp = Mlp::fit(&data, &TrainConfig::default()).unwrap();
        let correct = data
            .rows()
            .zip(data.labels())
            .filter(|&(row, &label)| u8::from(mlp.score_row(row) >= 0.5) == label)
            .count();
        assert_eq!(correct, data.n_rows());
    }

    #[test]
    fn early_stopping_respects_patience_and_cap() {
        let data = two_gaussian_blobs(80, 0.5, 21).unwrap();
        let config = TrainConfig {
            max_epochs: 40,
            ..TrainConfig::default()
        };
        let mlp = Mlp::fit(&data, &config).unwrap();
        let log = mlp.training_log();
        assert!(!log.is_empty());
        assert!(log.len() <= 40);
        let best_epoch = log
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i + 1)
            .unwrap();
        assert!(log.len() <= best_epoch + config.patience);
    }

    #[test]
    fn weighted_loss_with_equal_classes_is_unweighted() {
        let data = two_gaussian_blobs(100, 0.5, 9).unwrap();
        assert_eq!(data.positive_count() * 2, data.n_rows());
        let flat = flat_features(&data);
        let mlp = Mlp::random(2, &[6, 6], 3);
        let balanced = ClassWeights::balanced(data.labels()).unwrap();
        let a = mlp.loss(&flat, data.n_rows(), data.labels(), &balanced);
        let b = mlp.loss(&flat, data.n_rows(), data.labels(), &ClassWeights::uniform());
        assert_eq!(a, b);
    }

    #[test]
    fn weighted_and_unweighted_fits_agree_on_balanced_data() {
        let data = two_gaussian_blobs(64, 0.5, 15).unwrap();
        let a = Mlp::fit(
            &data,
            &TrainConfig {
                class_weighted: true,
                max_epochs: 5,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        let b = Mlp::fit(
            &data,
            &TrainConfig {
                class_weighted: false,
                max_epochs: 5,
                ..TrainConfig::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }
}

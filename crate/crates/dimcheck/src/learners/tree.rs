//! CART decision tree with Gini impurity.
//!
//! Splits minimize the weighted child Gini impurity; candidate thresholds are
//! midpoints between consecutive distinct feature values. Ties are broken by
//! lowest feature index, then lowest threshold (candidates are scanned in
//! that order and only a strictly better split replaces the incumbent), so
//! growth is fully deterministic.

use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;

use super::TreeParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) enum Node {
    Leaf {
        positive_fraction: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// A trained CART classifier. Scores are the positive-class fraction of the
/// training rows that reached the leaf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub(crate) nodes: Vec<Node>,
    pub(crate) n_features: usize,
    /// Growth hyperparameters, recorded for provenance.
    #[serde(default)]
    pub(crate) params: TreeParams,
}

/// How split candidates pick features: either every feature, or a seeded
/// random subset per split (used by the forest).
pub(crate) enum FeaturePolicy<'a> {
    All,
    Subset { m: usize, rng: &'a mut ChaCha8Rng },
}

impl FeaturePolicy<'_> {
    fn candidates(&mut self, n_features: usize) -> Vec<usize> {
        match self {
            FeaturePolicy::All => (0..n_features).collect(),
            FeaturePolicy::Subset { m, rng } => {
                let mut chosen = sample(rng, n_features, (*m).min(n_features)).into_vec();
                chosen.sort_unstable();
                chosen
            }
        }
    }
}

impl DecisionTree {
    pub(crate) fn fit_on_indices(
        data: &Dataset,
        indices: &[usize],
        params: &TreeParams,
        policy: &mut FeaturePolicy<'_>,
    ) -> Self {
        let mut tree = DecisionTree {
            nodes: Vec::new(),
            n_features: data.n_features(),
            params: params.clone(),
        };
        let mut idx = indices.to_vec();
        tree.grow(data, &mut idx, 0, params, policy);
        tree
    }

    pub fn fit(data: &Dataset, params: &TreeParams) -> Self {
        let indices: Vec<usize> = (0..data.n_rows()).collect();
        Self::fit_on_indices(data, &indices, params, &mut FeaturePolicy::All)
    }

    /// Grows the subtree over `indices` and returns its root node id.
    fn grow(
        &mut self,
        data: &Dataset,
        indices: &mut [usize],
        depth: usize,
        params: &TreeParams,
        policy: &mut FeaturePolicy<'_>,
    ) -> usize {
        let n = indices.len();
        let positives = indices.iter().filter(|&&i| data.labels()[i] == 1).count();
        let pure = positives == 0 || positives == n;
        let depth_capped = params.max_depth.is_some_and(|d| depth >= d);
        if pure || n < params.min_samples_split || depth_capped {
            return self.push_leaf(positives, n);
        }

        let best = self.best_split(data, indices, positives, policy);
        let Some((feature, threshold)) = best else {
            // all candidate features constant on this node
            return self.push_leaf(positives, n);
        };

        // partition in place: left gets rows with value <= threshold
        let mut mid = 0;
        for k in 0..n {
            if data.row(indices[k])[feature] <= threshold {
                indices.swap(k, mid);
                mid += 1;
            }
        }

        let id = self.nodes.len();
        self.nodes.push(Node::Split {
            feature,
            threshold,
            left: 0,
            right: 0,
        });
        let (left_idx, right_idx) = indices.split_at_mut(mid);
        let left = self.grow(data, left_idx, depth + 1, params, policy);
        let right = self.grow(data, right_idx, depth + 1, params, policy);
        if let Node::Split {
            left: l, right: r, ..
        } = &mut self.nodes[id]
        {
            *l = left;
            *r = right;
        }
        id
    }

    fn push_leaf(&mut self, positives: usize, n: usize) -> usize {
        self.nodes.push(Node::Leaf {
            positive_fraction: positives as f64 / n as f64,
        });
        self.nodes.len() - 1
    }

    /// Search candidate splits; None when no feature varies on this node.
    fn best_split(
        &self,
        data: &Dataset,
        indices: &[usize],
        positives: usize,
        policy: &mut FeaturePolicy<'_>,
    ) -> Option<(usize, f64)> {
        let n = indices.len();
        let total_pos = positives as f64;
        let mut best: Option<(usize, f64)> = None;
        let mut best_impurity = f64::INFINITY;

        let mut column: Vec<(f64, u8)> = Vec::with_capacity(n);
        for feature in policy.candidates(data.n_features()) {
            column.clear();
            column.extend(
                indices
                    .iter()
                    .map(|&i| (data.row(i)[feature], data.labels()[i])),
            );
            column.sort_by(|a, b| a.0.total_cmp(&b.0));

            let mut pos_left = 0.0;
            for k in 0..n - 1 {
                pos_left += f64::from(column[k].1);
                let (a, b) = (column[k].0, column[k + 1].0);
                if a == b {
                    continue;
                }
                let n_left = (k + 1) as f64;
                let n_right = (n - k - 1) as f64;
                let pos_right = total_pos - pos_left;
                let impurity = n_left * gini(pos_left, n_left) + n_right * gini(pos_right, n_right);
                if impurity < best_impurity {
                    best_impurity = impurity;
                    let mut threshold = 0.5 * (a + b);
                    // keep the counted partition exact if the midpoint rounds up
                    if threshold >= b {
                        threshold = a;
                    }
                    best = Some((feature, threshold));
                }
            }
        }
        best
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn score_row(&self, row: &[f64]) -> f64 {
        let mut node = 0;
        loop {
            match &self.nodes[node] {
                Node::Leaf { positive_fraction } => return *positive_fraction,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], id: usize) -> usize {
            match &nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

fn gini(pos: f64, n: f64) -> f64 {
    let p = pos / n;
    2.0 * p * (1.0 - p)
}

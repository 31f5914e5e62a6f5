//! Random forest: bagged CART trees with per-split feature subsampling and a
//! majority vote. The score is the fraction of trees voting class 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;

use super::tree::{DecisionTree, FeaturePolicy};
use super::{FeatureSubset, ForestParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub(crate) trees: Vec<DecisionTree>,
    pub(crate) n_features: usize,
    /// Ensemble hyperparameters, recorded for provenance.
    #[serde(default)]
    pub(crate) params: ForestParams,
}

impl RandomForest {
    /// Trees draw independent seeds from `seed`, so per-tree builds are
    /// order-independent and the whole fit is reproducible.
    pub fn fit(data: &Dataset, params: &ForestParams, seed: u64) -> Self {
        let n = data.n_rows();
        let n_features = data.n_features();
        let m = match params.features_per_split {
            FeatureSubset::All => n_features,
            FeatureSubset::Sqrt => (n_features as f64).sqrt().floor().max(1.0) as usize,
        };

        let trees: Vec<DecisionTree> = (0..params.n_trees)
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(t as u64));
                let indices: Vec<usize> = if params.bootstrap {
                    (0..n).map(|_| rng.gen_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                let mut policy = if m == n_features {
                    FeaturePolicy::All
                } else {
                    FeaturePolicy::Subset { m, rng: &mut rng }
                };
                DecisionTree::fit_on_indices(data, &indices, &params.tree, &mut policy)
            })
            .collect();

        RandomForest {
            trees,
            n_features,
            params: params.clone(),
        }
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Vote fraction: always a multiple of 1/n_trees.
    pub fn score_row(&self, row: &[f64]) -> f64 {
        let votes = self
            .trees
            .iter()
            .filter(|t| t.score_row(row) >= 0.5)
            .count();
        votes as f64 / self.trees.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::two_gaussian_blobs;
    use crate::learners::{TreeParams};

    #[test]
    fn single_tree_without_bagging_matches_plain_tree() {
        let data = two_gaussian_blobs(150, 0.3, 11).unwrap();
        let params = ForestParams {
            n_trees: 1,
            bootstrap: false,
            features_per_split: FeatureSubset::All,
            tree: TreeParams::default(),
        };
        let forest = RandomForest::fit(&data, &params, 42);
        let tree = DecisionTree::fit(&data, &TreeParams::default());
        for row in data.rows() {
            assert_eq!(
                forest.score_row(row) >= 0.5,
                tree.score_row(row) >= 0.5
            );
        }
    }

    #[test]
    fn scores_are_vote_fractions() {
        let data = two_gaussian_blobs(100, 0.4, 13).unwrap();
        let params = ForestParams {
            n_trees: 20,
            ..ForestParams::default()
        };
        let forest = RandomForest::fit(&data, &params, 1);
        for row in data.rows() {
            let s = forest.score_row(row);
            let scaled = s * 20.0;
            assert!((scaled - scaled.round()).abs() < 1e-9, "score {s} is not k/20");
        }
    }

    #[test]
    fn majority_vote_thresholds_at_half() {
        // hand-assembled forest: 3 trees voting 1, 1 voting 0 on everything
        let leaf = |fraction: f64| DecisionTree {
            nodes: vec![crate::learners::tree::Node::Leaf {
                positive_fraction: fraction,
            }],
            n_features: 1,
            params: TreeParams::default(),
        };
        let forest = RandomForest {
            trees: vec![leaf(1.0), leaf(1.0), leaf(1.0), leaf(0.0)],
            n_features: 1,
            params: ForestParams::default(),
        };
        assert_eq!(forest.score_row(&[0.0]), 0.75);
    }

    #[test]
    fn fit_is_seed_deterministic() {
        let data = two_gaussian_blobs(120, 0.25, 5).unwrap();
        let a = RandomForest::fit(&data, &ForestParams::default(), 9);
        let b = RandomForest::fit(&data, &ForestParams::default(), 9);
        assert_eq!(a, b);
    }
}

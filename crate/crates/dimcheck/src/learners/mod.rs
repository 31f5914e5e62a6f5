//! From-scratch baseline classifiers: CART decision tree, random forest,
//! linear SVM, and a small fully connected network.
//!
//! All four learners share one contract: `fit` is deterministic for a fixed
//! (data, config, seed), models are immutable after training, and every model
//! exposes both a hard prediction and a real-valued ranking score. Scores are
//! probability-like (threshold 0.5) for the tree, forest, and network, and a
//! signed margin (threshold 0) for the SVM, so predictions and score order
//! always agree.

mod forest;
mod mlp;
mod svm;
mod tree;

pub use forest::RandomForest;
pub use mlp::Mlp;
pub use svm::LinearSvm;
pub use tree::DecisionTree;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Which classifier to train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    DecisionTree,
    RandomForest,
    LinearSvm,
    Mlp,
}

impl std::fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LearnerKind::DecisionTree => write!(f, "tree"),
            LearnerKind::RandomForest => write!(f, "forest"),
            LearnerKind::LinearSvm => write!(f, "svm"),
            LearnerKind::Mlp => write!(f, "mlp"),
        }
    }
}

/// Decision tree hyperparameters. Defaults grow until pure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: None,
            min_samples_split: 2,
        }
    }
}

/// How many candidate features each forest split considers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSubset {
    /// All features: with bootstrapping off, a 1-tree forest reduces to the
    /// plain decision tree.
    All,
    /// floor(sqrt(F)), at least 1.
    Sqrt,
}

/// Random forest hyperparameters: 100 bootstrapped trees, sqrt(F) features
/// per split, majority vote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub bootstrap: bool,
    pub features_per_split: FeatureSubset,
    pub tree: TreeParams,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            bootstrap: true,
            features_per_split: FeatureSubset::Sqrt,
            tree: TreeParams::default(),
        }
    }
}

/// Linear SVM hyperparameters: L2-regularized hinge loss solved by
/// deterministic epoch-based subgradient descent with step 1/(lambda t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    /// Inverse regularization strength; lambda = 1 / (c * N).
    pub c: f64,
    pub max_epochs: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            max_epochs: 1000,
        }
    }
}

/// Network hyperparameters: 5 hidden ReLU layers of 30 units, softmax
/// output, Adam steps, dropout between hidden layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub hidden_layers: usize,
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub dropout: f64,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden_layers: 5,
            hidden_units: 30,
            learning_rate: 1e-3,
            batch_size: 32,
            dropout: 0.2,
        }
    }
}

/// Per-learner parameter blocks, all defaulted.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LearnerParams {
    pub tree: TreeParams,
    pub forest: ForestParams,
    pub svm: SvmParams,
    pub mlp: MlpParams,
}

/// Everything `fit` needs besides the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub seed: u64,
    /// Epoch cap for the network (the SVM has its own in [`SvmParams`]).
    pub max_epochs: usize,
    /// Consecutive non-improving epochs tolerated before stopping.
    pub patience: usize,
    /// Reweight the loss by inverse class frequency (SVM and network only).
    pub class_weighted: bool,
    pub params: LearnerParams,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            seed: 0,
            max_epochs: 100,
            patience: 3,
            class_weighted: false,
            params: LearnerParams::default(),
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.max_epochs == 0 {
            return Err(Error::InvalidConfig("max_epochs must be >= 1".into()));
        }
        if self.patience == 0 {
            return Err(Error::InvalidConfig("patience must be >= 1".into()));
        }
        if self.params.mlp.batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.params.mlp.dropout) {
            return Err(Error::InvalidConfig("dropout must be in [0, 1)".into()));
        }
        if self.params.forest.n_trees == 0 {
            return Err(Error::InvalidConfig("n_trees must be >= 1".into()));
        }
        Ok(())
    }
}

/// Per-class loss weights. With weighting enabled each class is scaled by the
/// reciprocal of its frequency, normalized so the majority weight is 1; the
/// positive/negative ratio is therefore neg_count/pos_count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    pub positive: f64,
    pub negative: f64,
}

impl ClassWeights {
    pub fn uniform() -> Self {
        ClassWeights {
            positive: 1.0,
            negative: 1.0,
        }
    }

    /// Inverse-frequency weights for a label vector with both classes.
    pub fn balanced(labels: &[u8]) -> Result<Self> {
        let pos = labels.iter().filter(|&&l| l == 1).count();
        let neg = labels.len() - pos;
        if pos == 0 || neg == 0 {
            return Err(Error::SingleClassTraining);
        }
        Ok(ClassWeights {
            positive: neg as f64 / pos as f64,
            negative: 1.0,
        })
    }

    pub fn from_config(class_weighted: bool, labels: &[u8]) -> Result<Self> {
        if class_weighted {
            Self::balanced(labels)
        } else {
            Ok(Self::uniform())
        }
    }

    pub fn weight_of(&self, label: u8) -> f64 {
        if label == 1 {
            self.positive
        } else {
            self.negative
        }
    }
}

/// A trained classifier. Serializes to a self-describing JSON document
/// (kind, hyperparameters, learned parameters).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    DecisionTree(DecisionTree),
    RandomForest(RandomForest),
    LinearSvm(LinearSvm),
    Mlp(Mlp),
}

/// Train a classifier of the given kind. Deterministic for a fixed seed;
/// fails on single-class training data or a non-finite training loss.
pub fn fit(kind: LearnerKind, train: &Dataset, config: &TrainConfig) -> Result<Model> {
    config.validate()?;
    let positives = train.positive_count();
    if positives == 0 || positives == train.n_rows() {
        return Err(Error::SingleClassTraining);
    }
    match kind {
        LearnerKind::DecisionTree => Ok(Model::DecisionTree(DecisionTree::fit(
            train,
            &config.params.tree,
        ))),
        LearnerKind::RandomForest => Ok(Model::RandomForest(RandomForest::fit(
            train,
            &config.params.forest,
            config.seed,
        ))),
        LearnerKind::LinearSvm => Ok(Model::LinearSvm(LinearSvm::fit(train, config))),
        LearnerKind::Mlp => Ok(Model::Mlp(Mlp::fit(train, config)?)),
    }
}

impl Model {
    pub fn kind(&self) -> LearnerKind {
        match self {
            Model::DecisionTree(_) => LearnerKind::DecisionTree,
            Model::RandomForest(_) => LearnerKind::RandomForest,
            Model::LinearSvm(_) => LearnerKind::LinearSvm,
            Model::Mlp(_) => LearnerKind::Mlp,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            Model::DecisionTree(m) => m.n_features(),
            Model::RandomForest(m) => m.n_features(),
            Model::LinearSvm(m) => m.n_features(),
            Model::Mlp(m) => m.n_features(),
        }
    }

    /// Ranking score for one row: P(class 1) for probabilistic models, the
    /// signed margin for the SVM.
    pub fn score_row(&self, row: &[f64]) -> Result<f64> {
        if row.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                got: row.len(),
            });
        }
        Ok(match self {
            Model::DecisionTree(m) => m.score_row(row),
            Model::RandomForest(m) => m.score_row(row),
            Model::LinearSvm(m) => m.score_row(row),
            Model::Mlp(m) => m.score_row(row),
        })
    }

    /// Score threshold above which a row is classed 1.
    pub fn decision_threshold(&self) -> f64 {
        match self {
            Model::LinearSvm(_) => 0.0,
            _ => 0.5,
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> Result<u8> {
        Ok(u8::from(self.score_row(row)? >= self.decision_threshold()))
    }

    pub fn score(&self, data: &Dataset) -> Result<Vec<f64>> {
        data.rows().map(|r| self.score_row(r)).collect()
    }

    pub fn predict(&self, data: &Dataset) -> Result<Vec<u8>> {
        data.rows().map(|r| self.predict_row(r)).collect()
    }

    /// Per-epoch training loss; empty for the non-iterative learners.
    pub fn training_log(&self) -> &[f64] {
        match self {
            Model::LinearSvm(m) => m.training_log(),
            Model::Mlp(m) => m.training_log(),
            _ => &[],
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<Model> {
        Ok(serde_json::from_str(json)?)
    }
}

//! Check whether a tabular dataset is intrinsically simple before choosing a
//! learner.
//!
//! The crate has two halves:
//!
//! - [`intrinsic`] estimates the intrinsic dimensionality of a dataset from
//!   the growth rate of its correlation integral (the box-counting method),
//!   with the synthetic generators in [`dataset`] to verify the estimator
//!   against known ground truth.
//! - [`learners`], [`metrics`], [`rig`], and [`stats`] reproduce a learner
//!   comparison protocol: four from-scratch classifiers, recall / false
//!   alarm / AUC, repeated stratified evaluation, and Cohen's-d "close to
//!   the best" winner tables.
//!
//! Start with the runnable examples (`cargo run --example ...`); the `dimcheck`
//! binary wraps the same workflows as subcommands.

pub mod cli;
pub mod dataset;
pub mod error;
pub mod intrinsic;
pub mod learners;
pub mod metrics;
pub mod rig;
pub mod stats;

pub use dataset::{load_csv, Dataset};
pub use error::{Error, Result};
pub use intrinsic::{estimate_dimension, DimensionEstimate, EstimatorConfig, Norm};
pub use learners::{fit, LearnerKind, Model, TrainConfig};

//! Serialize a trained model to JSON and load it back.
//!
//! Models serialize to a self-describing document (kind, hyperparameters,
//! learned parameters); a reloaded model scores identically.
//!
//! ```bash
//! cargo run --release --example model_io
//! ```

use dimcheck::dataset::two_gaussian_blobs;
use dimcheck::learners::{fit, LearnerKind, Model, TrainConfig};

fn main() -> dimcheck::Result<()> {
    let data = two_gaussian_blobs(200, 0.3, 3)?;
    let model = fit(LearnerKind::LinearSvm, &data, &TrainConfig::default())?;

    let json = model.to_json()?;
    println!("serialized model:\n{json}\n");

    let reloaded = Model::from_json(&json)?;
    assert_eq!(model.score(&data)?, reloaded.score(&data)?);
    println!("reloaded model scores match the original on all {} rows", data.n_rows());
    Ok(())
}

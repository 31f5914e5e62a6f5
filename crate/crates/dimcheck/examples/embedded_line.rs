//! Ambient dimension is not intrinsic dimension.
//!
//! Points on a line embedded in 10-dimensional space have 10 columns but one
//! latent degree of freedom; the estimator reports roughly 1. Appending a
//! duplicate row does not inflate the estimate.
//!
//! ```bash
//! cargo run --release --example embedded_line
//! ```

use dimcheck::dataset::{generate, Dataset, SyntheticKind, SyntheticSpec};
use dimcheck::intrinsic::{estimate_dimension, EstimatorConfig};

fn main() -> dimcheck::Result<()> {
    let spec = SyntheticSpec {
        kind: SyntheticKind::EmbeddedLine,
        ambient_dim: 10,
        n_samples: 1000,
        seed: 1,
    };
    let data = generate(&spec)?;
    let config = EstimatorConfig::default();
    let estimate = estimate_dimension(&data, &config)?;
    println!(
        "line in {}-dimensional space: estimate {:.3} (a line is 1-dimensional)",
        data.n_features(),
        estimate.value
    );

    let mut rows: Vec<Vec<f64>> = data.rows().map(|r| r.to_vec()).collect();
    rows.push(rows[0].clone());
    let with_dup = Dataset::from_rows(
        "line_with_duplicate",
        data.feature_names().to_vec(),
        &rows,
        vec![0; rows.len()],
    )?;
    let estimate = estimate_dimension(&with_dup, &config)?;
    println!(
        "same line plus one duplicated row: estimate {:.3}",
        estimate.value
    );
    Ok(())
}

//! Estimate the intrinsic dimension of a CSV file and export the curve.
//!
//! Pass a CSV path (header row, numeric features, a `label` column), or run
//! without arguments to generate a demo file first. Writes the estimate
//! summary JSON and a plot-ready curve CSV next to the input.
//!
//! ```bash
//! cargo run --release --example dimension_of_csv [data.csv]
//! ```

use std::path::PathBuf;

use dimcheck::dataset::{generate, SyntheticKind, SyntheticSpec};
use dimcheck::intrinsic::{
    estimate_dimension, export_curve, EstimateSummary, EstimatorConfig,
};

fn main() -> dimcheck::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => PathBuf::from(p),
        None => {
            let demo = std::env::temp_dir().join("dimcheck_demo_cube.csv");
            let data = generate(&SyntheticSpec {
                kind: SyntheticKind::UniformCube,
                ambient_dim: 3,
                n_samples: 800,
                seed: 7,
            })?;
            data.write_csv(&demo)?;
            println!("no input given; wrote demo dataset to {}", demo.display());
            demo
        }
    };

    let data = dimcheck::load_csv(&path, "label", "1")?;
    let config = EstimatorConfig::default();
    let estimate = estimate_dimension(&data, &config)?;

    let summary = EstimateSummary::new(data.name(), &config, &estimate);
    println!("{}", serde_json::to_string_pretty(&summary).unwrap());

    let curve_path = path.with_extension("curve.csv");
    export_curve(&estimate, &curve_path)?;
    println!("curve written to {}", curve_path.display());
    Ok(())
}

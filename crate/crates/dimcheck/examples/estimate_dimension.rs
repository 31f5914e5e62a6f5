//! Estimate the intrinsic dimension of an in-memory dataset.
//!
//! Draws a 5-dimensional uniform cube, runs the box-counting estimator, and
//! prints the estimate together with the tail of the log-log curve it was
//! read from.
//!
//! ```bash
//! cargo run --release --example estimate_dimension
//! ```

use dimcheck::dataset::{generate, SyntheticKind, SyntheticSpec};
use dimcheck::intrinsic::{estimate_dimension, EstimatorConfig};

fn main() -> dimcheck::Result<()> {
    let spec = SyntheticSpec {
        kind: SyntheticKind::UniformCube,
        ambient_dim: 5,
        n_samples: 1000,
        seed: 42,
    };
    let data = generate(&spec)?;
    println!(
        "dataset: {} ({} rows x {} ambient dimensions)",
        data.name(),
        data.n_rows(),
        data.n_features()
    );

    let config = EstimatorConfig::default();
    let estimate = estimate_dimension(&data, &config)?;
    println!(
        "intrinsic dimension estimate: {:.3} (true value 5)",
        estimate.value
    );
    println!(
        "{} usable radii, norm {}, smoothing window {}",
        estimate.usable_points, config.norm, config.window
    );

    println!("\nsteepest part of the smoothed log-log curve:");
    let first = estimate.curve.radii.len() - estimate.usable_points;
    let peak = estimate
        .smoothed_slopes
        .iter()
        .position(|&s| s == estimate.value)
        .unwrap();
    for k in peak.saturating_sub(3)..(peak + 4).min(estimate.smoothed_slopes.len()) {
        println!(
            "  ln r = {:+.3}  ln C = {:+.3}  smoothed slope = {:.3}{}",
            estimate.curve.radii[first + k + 1].ln(),
            estimate.curve.c_values[first + k + 1].ln(),
            estimate.smoothed_slopes[k],
            if k == peak { "  <- estimate" } else { "" }
        );
    }
    Ok(())
}

//! Train each classifier and compare them on held-out data.
//!
//! Fits the decision tree, random forest, linear SVM, and the network
//! (weighted and unweighted) on one blob sample and evaluates recall, false
//! alarm, and AUC on a fresh one. Also shows where the linear model breaks:
//! an XOR pattern the tree solves exactly.
//!
//! ```bash
//! cargo run --release --example train_learners
//! ```

use dimcheck::dataset::{two_gaussian_blobs, Dataset};
use dimcheck::learners::{fit, LearnerKind, TrainConfig};
use dimcheck::metrics::MetricsRecord;

fn main() -> dimcheck::Result<()> {
    let train = two_gaussian_blobs(400, 0.2, 1)?;
    let test = two_gaussian_blobs(400, 0.2, 2)?;
    println!(
        "blobs: {} train / {} test rows, {:.0}% positive",
        train.n_rows(),
        test.n_rows(),
        100.0 * train.class_ratio()
    );
    println!("\nlearner        recall  false alarm  auc");
    for (name, kind, weighted) in [
        ("tree", LearnerKind::DecisionTree, false),
        ("forest", LearnerKind::RandomForest, false),
        ("svm", LearnerKind::LinearSvm, false),
        ("mlp", LearnerKind::Mlp, false),
        ("mlp-weighted", LearnerKind::Mlp, true),
    ] {
        let config = TrainConfig {
            seed: 7,
            class_weighted: weighted,
            ..TrainConfig::default()
        };
        let model = fit(kind, &train, &config)?;
        let metrics = MetricsRecord::evaluate(
            test.labels(),
            &model.predict(&test)?,
            &model.score(&test)?,
        )?;
        println!(
            "{name:<14} {:>5.3}  {:>10.3}  {:>5.3}",
            metrics.recall.unwrap(),
            metrics.false_alarm.unwrap(),
            metrics.auc.unwrap()
        );
    }

    // XOR: four cells no hyperplane can separate
    let cells = [
        (vec![0.0, 0.0], 0u8),
        (vec![1.0, 1.0], 0u8),
        (vec![0.0, 1.0], 1u8),
        (vec![1.0, 0.0], 1u8),
    ];
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..25 {
        for (row, label) in &cells {
            rows.push(row.clone());
            labels.push(*label);
        }
    }
    let xor = Dataset::from_rows("xor", vec!["x0".into(), "x1".into()], &rows, labels)?;
    println!("\nXOR training accuracy:");
    for (name, kind) in [
        ("tree", LearnerKind::DecisionTree),
        ("svm", LearnerKind::LinearSvm),
    ] {
        let model = fit(kind, &xor, &TrainConfig::default())?;
        let preds = model.predict(&xor)?;
        let acc = preds
            .iter()
            .zip(xor.labels())
            .filter(|(p, y)| p == y)
            .count() as f64
            / xor.n_rows() as f64;
        println!("  {name:<6} {:.0}%", 100.0 * acc);
    }
    Ok(())
}

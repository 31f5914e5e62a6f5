//! The full evaluation protocol, end to end.
//!
//! Runs every learner through the repeated stratified protocol (10 shuffles,
//! 5 test bins, one fit per shuffle on the full training set) over two
//! synthetic dataset pairs, aggregates medians, computes per-metric Cohen's-d
//! thresholds, and prints the winner-marked tables. Winners are bracketed.
//!
//! The first pair is linearly separable; the second is a jittered XOR where
//! no hyperplane works, so the linear SVM drops out of the winner set while
//! the tree learners and the network stay in it.
//!
//! ```bash
//! cargo run --release --example benchmark_rig
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use dimcheck::dataset::{two_gaussian_blobs, Dataset};
use dimcheck::rig::{aggregate, mean_fit_seconds, run_experiment, DatasetPair, ExperimentPlan};
use dimcheck::stats::{cohens_threshold, mark_winners, render_text, DEFAULT_EFFECT_SIZE};

/// XOR cells with Gaussian jitter: a pattern only non-linear learners solve.
fn jittered_xor(n: usize, seed: u64) -> dimcheck::Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let a = rng.gen_range(0..2);
        let b = rng.gen_range(0..2);
        let x = a as f64 + 0.15 * rng.sample::<f64, _>(StandardNormal);
        let y = b as f64 + 0.15 * rng.sample::<f64, _>(StandardNormal);
        rows.push(vec![x, y]);
        labels.push((a ^ b) as u8);
    }
    Dataset::from_rows("xor", vec!["x0".into(), "x1".into()], &rows, labels)
}

fn main() -> dimcheck::Result<()> {
    let datasets = vec![
        DatasetPair {
            name: "blobs".into(),
            train: two_gaussian_blobs(400, 0.2, 10)?,
            test: two_gaussian_blobs(400, 0.2, 11)?,
        },
        DatasetPair {
            name: "xor".into(),
            train: jittered_xor(400, 20)?,
            test: jittered_xor(400, 21)?,
        },
    ];
    let learners = ["tree", "forest", "svm", "mlp", "mlp-weighted"]
        .iter()
        .map(|name| dimcheck::cli::parse_learner(name, 0))
        .collect::<dimcheck::Result<Vec<_>>>()?;

    let plan = ExperimentPlan::new(datasets, learners, 7);
    let outcome = run_experiment(&plan)?;
    println!(
        "{} records from {} repeats x {} bins\n",
        outcome.records.len(),
        plan.n_repeats,
        plan.n_bins
    );

    let agg = aggregate(&outcome.records)?;
    for table in &agg.tables {
        let threshold = cohens_threshold(&table.defined_cells(), DEFAULT_EFFECT_SIZE)?;
        let marking = mark_winners(table, threshold, table.metric.direction())?;
        println!("{}", render_text(table, &marking));
    }

    println!("mean fit seconds:");
    for (learner, secs) in mean_fit_seconds(&outcome.records) {
        println!("  {learner:<14} {secs:.3}");
    }
    Ok(())
}

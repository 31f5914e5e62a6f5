//! Binary-level tests: exit codes, error wording, and agreement between the
//! CLI and the library API.

use std::path::Path;
use std::process::{Command, Output};

use dimcheck::dataset::{generate, two_gaussian_blobs, SyntheticKind, SyntheticSpec};
use dimcheck::intrinsic::{estimate_dimension, EstimatorConfig};

fn dimcheck(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimcheck"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

#[test]
fn dim_rejects_two_row_dataset_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("twopoints.csv"), "a,b,label\n1,2,0\n3,4,1\n").unwrap();
    let out = dimcheck(dir.path(), &["dim", "twopoints.csv"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("need at least 3 rows"),
        "stderr was: {stderr}"
    );
}

#[test]
fn dim_missing_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dimcheck(dir.path(), &["dim", "nope.csv"]);
    assert!(!out.status.success());
}

#[test]
fn dim_matches_library_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let data = generate(&SyntheticSpec {
        kind: SyntheticKind::UniformCube,
        ambient_dim: 5,
        n_samples: 200,
        seed: 3,
    })
    .unwrap();
    data.write_csv(&dir.path().join("cube5.csv")).unwrap();

    let out = dimcheck(
        dir.path(),
        &["dim", "cube5.csv", "--steps", "50", "--window", "3"],
    );
    assert!(out.status.success());

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/estimate.json")).unwrap())
            .unwrap();
    let expected = estimate_dimension(&data, &EstimatorConfig::default()).unwrap();
    assert_eq!(summary["value"].as_f64().unwrap(), expected.value);
    assert_eq!(
        summary["usable_points"].as_u64().unwrap() as usize,
        expected.usable_points
    );
    // curve file has one data row per usable radius
    let curve =
        std::fs::read_to_string(dir.path().join("out/curves/cube5.csv")).unwrap();
    assert_eq!(curve.lines().count(), expected.usable_points + 1);
}

#[test]
fn synth_then_dim_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dimcheck(
        dir.path(),
        &["synth", "--kind", "line", "--dim", "8", "--samples", "300", "--seed", "2"],
    );
    assert!(out.status.success());
    let out = dimcheck(dir.path(), &["dim", "out/line_d8_s300.csv"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("intrinsic dimension"), "stdout: {stdout}");
}

#[test]
fn bench_rejects_unknown_learner() {
    let dir = tempfile::tempdir().unwrap();
    two_gaussian_blobs(40, 0.5, 0)
        .unwrap()
        .write_csv(&dir.path().join("train.csv"))
        .unwrap();
    two_gaussian_blobs(40, 0.5, 1)
        .unwrap()
        .write_csv(&dir.path().join("test.csv"))
        .unwrap();
    let out = dimcheck(
        dir.path(),
        &["bench", "train.csv", "test.csv", "--learners", "boosting"],
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown learner"));
}

#[test]
fn bench_rejects_schema_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    two_gaussian_blobs(40, 0.5, 0)
        .unwrap()
        .write_csv(&dir.path().join("train.csv"))
        .unwrap();
    std::fs::write(dir.path().join("test.csv"), "q,label\n1,0\n2,1\n3,0\n").unwrap();
    let out = dimcheck(dir.path(), &["bench", "train.csv", "test.csv"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema mismatch"));
}

#[test]
fn report_on_bench_records_marks_winners() {
    let dir = tempfile::tempdir().unwrap();
    two_gaussian_blobs(60, 0.3, 4)
        .unwrap()
        .write_csv(&dir.path().join("train.csv"))
        .unwrap();
    two_gaussian_blobs(60, 0.3, 5)
        .unwrap()
        .write_csv(&dir.path().join("test.csv"))
        .unwrap();
    let out = dimcheck(
        dir.path(),
        &[
            "bench", "train.csv", "test.csv", "--learners", "tree,svm", "--repeats", "2",
            "--bins", "3", "--out-dir", "bench",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = dimcheck(
        dir.path(),
        &["report", "bench/records.jsonl", "--out-dir", "report"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    for stem in ["recall", "pf", "auc"] {
        let flags = std::fs::read_to_string(
            dir.path().join(format!("report/tables/metric_{stem}_winners.csv")),
        )
        .unwrap();
        let mut lines = flags.lines();
        assert_eq!(lines.next().unwrap(), "dataset,tree,svm");
        // every row must have at least one winner
        for line in lines {
            let tail: Vec<&str> = line.split(',').skip(1).collect();
            assert!(tail.contains(&"1"), "no winner in {line}");
        }
    }
    assert!(dir.path().join("report/report.txt").exists());
    assert!(dir.path().join("report/manifest.json").exists());
}

#[test]
fn report_survives_closed_stdout_pipe() {
    let dir = tempfile::tempdir().unwrap();
    two_gaussian_blobs(60, 0.3, 4)
        .unwrap()
        .write_csv(&dir.path().join("train.csv"))
        .unwrap();
    two_gaussian_blobs(60, 0.3, 5)
        .unwrap()
        .write_csv(&dir.path().join("test.csv"))
        .unwrap();
    let out = dimcheck(
        dir.path(),
        &[
            "bench", "train.csv", "test.csv", "--learners", "tree,svm", "--repeats", "2",
            "--bins", "3", "--out-dir", "bench",
        ],
    );
    assert!(out.status.success());

    // close the read end of stdout before the command prints, as `| head` does
    let mut child = Command::new(env!("CARGO_BIN_EXE_dimcheck"))
        .args(["report", "bench/records.jsonl", "--out-dir", "report"])
        .current_dir(dir.path())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let status = child.wait().unwrap();
    assert!(status.success(), "report died on a closed pipe");

    // every file output must exist despite the dead pipe
    for file in [
        "report/report.txt",
        "report/manifest.json",
        "report/tables/metric_recall.csv",
        "report/tables/metric_pf_winners.csv",
        "report/tables/metric_auc_winners.csv",
    ] {
        assert!(dir.path().join(file).exists(), "{file} missing");
    }
}

#[test]
fn report_on_empty_records_fails() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("records.jsonl"), "").unwrap();
    let out = dimcheck(dir.path(), &["report", "records.jsonl"]);
    assert!(!out.status.success());
}

#[test]
fn zero_d_fraction_keeps_only_row_best() {
    let dir = tempfile::tempdir().unwrap();
    two_gaussian_blobs(60, 0.3, 7)
        .unwrap()
        .write_csv(&dir.path().join("train.csv"))
        .unwrap();
    two_gaussian_blobs(60, 0.3, 8)
        .unwrap()
        .write_csv(&dir.path().join("test.csv"))
        .unwrap();
    let out = dimcheck(
        dir.path(),
        &[
            "bench", "train.csv", "test.csv", "--learners", "tree,svm,forest", "--repeats",
            "2", "--bins", "3", "--out-dir", "bench",
        ],
    );
    assert!(out.status.success());
    let out = dimcheck(
        dir.path(),
        &[
            "report", "bench/records.jsonl", "--d-fraction", "0", "--out-dir", "report0",
        ],
    );
    assert!(out.status.success());

    // with threshold zero, winners are exactly the row-best cells (ties win)
    for stem in ["recall", "pf", "auc"] {
        let cells = std::fs::read_to_string(
            dir.path().join(format!("report0/tables/metric_{stem}.csv")),
        )
        .unwrap();
        let flags = std::fs::read_to_string(
            dir.path().join(format!("report0/tables/metric_{stem}_winners.csv")),
        )
        .unwrap();
        for (cell_line, flag_line) in cells.lines().skip(1).zip(flags.lines().skip(1)) {
            let values: Vec<f64> = cell_line
                .split(',')
                .skip(1)
                .map(|v| v.parse().unwrap())
                .collect();
            let marks: Vec<bool> = flag_line.split(',').skip(1).map(|v| v == "1").collect();
            let best = if stem == "pf" {
                values.iter().copied().fold(f64::INFINITY, f64::min)
            } else {
                values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            };
            for (v, m) in values.iter().zip(marks) {
                assert_eq!(m, *v == best, "{stem}: {cell_line} vs {flag_line}");
            }
        }
    }
}

//! Tabular binary-labeled datasets: CSV loading, synthesis, shuffling, and
//! stratified splitting.
//!
//! A [`Dataset`] is immutable after construction; every operation that
//! "modifies" one returns a new value, and all randomness is driven by an
//! explicit seed.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Feature matrix with binary labels. Rows are instances, columns features.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    feature_names: Vec<String>,
    /// Row-major, `n_rows * n_features` values, all finite.
    features: Vec<f64>,
    /// One mark per row, 1 = positive/actionable, 0 = negative.
    labels: Vec<u8>,
    n_features: usize,
}

impl Dataset {
    /// Build a dataset from per-row feature slices, validating the invariants:
    /// at least one row and one column, equal row lengths, finite values,
    /// labels in {0, 1}.
    pub fn from_rows(
        name: impl Into<String>,
        feature_names: Vec<String>,
        rows: &[Vec<f64>],
        labels: Vec<u8>,
    ) -> Result<Self> {
        let n_features = feature_names.len();
        if rows.is_empty() {
            return Err(Error::InvalidDataset("no rows".into()));
        }
        if n_features == 0 {
            return Err(Error::InvalidDataset("no feature columns".into()));
        }
        if labels.len() != rows.len() {
            return Err(Error::LengthMismatch {
                left: rows.len(),
                right: labels.len(),
            });
        }
        let mut features = Vec::with_capacity(rows.len() * n_features);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_features {
                return Err(Error::InvalidDataset(format!(
                    "row {i} has {} values, expected {n_features}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::BadCell {
                        row: i,
                        column: feature_names[j].clone(),
                        value: v.to_string(),
                    });
                }
            }
            features.extend_from_slice(row);
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::InvalidDataset(format!(
                "label {bad} is not in {{0, 1}}"
            )));
        }
        Ok(Dataset {
            name: name.into(),
            feature_names,
            features,
            labels,
            n_features,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks_exact(self.n_features)
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn positive_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    /// Fraction of rows labeled 1.
    pub fn class_ratio(&self) -> f64 {
        self.positive_count() as f64 / self.n_rows() as f64
    }

    /// Deterministic row permutation. The multiset of (row, label) pairs is
    /// unchanged; two calls with the same seed produce identical output.
    pub fn shuffle(&self, seed: u64) -> Dataset {
        let mut order: Vec<usize> = (0..self.n_rows()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
        self.take_rows(&order, self.name.clone())
    }

    /// New dataset containing the given rows, in the given order.
    pub fn take_rows(&self, indices: &[usize], name: String) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            name,
            feature_names: self.feature_names.clone(),
            features,
            labels,
            n_features: self.n_features,
        }
    }

    /// Copy with per-feature min-max scaling into [0, 1]. Constant features
    /// map to 0.
    pub fn min_max_normalized(&self) -> Dataset {
        let f = self.n_features;
        let mut lo = vec![f64::INFINITY; f];
        let mut hi = vec![f64::NEG_INFINITY; f];
        for row in self.rows() {
            for j in 0..f {
                lo[j] = lo[j].min(row[j]);
                hi[j] = hi[j].max(row[j]);
            }
        }
        let mut features = self.features.clone();
        for (k, v) in features.iter_mut().enumerate() {
            let j = k % f;
            let span = hi[j] - lo[j];
            *v = if span > 0.0 { (*v - lo[j]) / span } else { 0.0 };
        }
        Dataset {
            name: self.name.clone(),
            feature_names: self.feature_names.clone(),
            features,
            labels: self.labels.clone(),
            n_features: f,
        }
    }

    /// Serialize as CSV: header of feature names plus a final `label` column.
    /// Float formatting round-trips, so a reload reproduces the dataset
    /// exactly.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for (j, name) in self.feature_names.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(name);
        }
        out.push_str(",label\n");
        for (i, row) in self.rows().enumerate() {
            for &v in row {
                let _ = write!(out, "{v},");
            }
            let _ = writeln!(out, "{}", self.labels[i]);
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

/// Load a CSV with a header row. `label_column` is matched against the header
/// first and falls back to a 0-based column index; cells equal to
/// `positive_label` map to class 1, everything else to 0. All other cells
/// must parse as finite numbers.
pub fn load_csv(path: &Path, label_column: &str, positive_label: &str) -> Result<Dataset> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    parse_csv(&raw, &name, label_column, positive_label)
}

fn parse_csv(raw: &str, name: &str, label_column: &str, positive_label: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(raw.as_bytes());
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();

    let label_idx = match header.iter().position(|h| h == label_column) {
        Some(i) => i,
        None => match label_column.parse::<usize>() {
            Ok(i) if i < header.len() => i,
            _ => return Err(Error::MissingLabelColumn(label_column.to_string())),
        },
    };

    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != label_idx)
        .map(|(_, h)| h.clone())
        .collect();
    if feature_names.is_empty() {
        return Err(Error::InvalidDataset("no feature columns".into()));
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let mut row = Vec::with_capacity(feature_names.len());
        for (j, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if j == label_idx {
                labels.push(u8::from(cell == positive_label));
            } else {
                let column = header.get(j).cloned().unwrap_or_else(|| j.to_string());
                let v: f64 = cell.parse().map_err(|_| Error::BadCell {
                    row: i,
                    column: column.clone(),
                    value: cell.to_string(),
                })?;
                if !v.is_finite() {
                    return Err(Error::BadCell {
                        row: i,
                        column,
                        value: cell.to_string(),
                    });
                }
                row.push(v);
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyData);
    }
    Dataset::from_rows(name, feature_names, &rows, labels)
}

/// Deterministic assignment of every row to one of `n_bins` stratified bins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    pub seed: u64,
    pub n_bins: usize,
    /// Bin index in `[0, n_bins)` for each row.
    pub bin_assignments: Vec<usize>,
}

impl SplitPlan {
    pub fn indices_in_bin(&self, bin: usize) -> Vec<usize> {
        self.bin_assignments
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b == bin)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn extract(&self, data: &Dataset, bin: usize) -> Dataset {
        let idx = self.indices_in_bin(bin);
        data.take_rows(&idx, format!("{}#bin{bin}", data.name()))
    }
}

/// Stratified binning: per class, rows are shuffled and dealt round-robin to
/// bins through a cursor that continues across classes, so per-bin class
/// counts and bin sizes both stay within ±1 of proportionality.
pub fn stratified_bins(data: &Dataset, n_bins: usize, seed: u64) -> Result<SplitPlan> {
    let n = data.n_rows();
    if n_bins < 2 {
        return Err(Error::InvalidDataset(format!(
            "n_bins must be at least 2, got {n_bins}"
        )));
    }
    if n_bins > n {
        return Err(Error::TooManyBins { n_bins, n_rows: n });
    }
    let positives = data.positive_count();
    if positives == 0 || positives == n {
        return Err(Error::SingleClassTraining);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![0usize; n];
    let mut cursor = 0usize;
    for class in [1u8, 0u8] {
        let mut idx: Vec<usize> = (0..n).filter(|&i| data.labels()[i] == class).collect();
        idx.shuffle(&mut rng);
        for i in idx {
            assignments[i] = cursor % n_bins;
            cursor += 1;
        }
    }
    Ok(SplitPlan {
        seed,
        n_bins,
        bin_assignments: assignments,
    })
}

/// What kind of synthetic point cloud to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// i.i.d. uniform [0,1] coordinates: intrinsic dimension = ambient.
    UniformCube,
    /// Points on a random 1-D affine segment inside the ambient space.
    EmbeddedLine,
}

impl std::str::FromStr for SyntheticKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cube" | "uniform_cube" => Ok(SyntheticKind::UniformCube),
            "line" | "embedded_line" => Ok(SyntheticKind::EmbeddedLine),
            other => Err(Error::UnknownName {
                what: "synthetic kind",
                value: other.to_string(),
                options: "cube, line",
            }),
        }
    }
}

/// Specification of a synthetic dataset draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    pub ambient_dim: usize,
    pub n_samples: usize,
    pub seed: u64,
}

/// Draw the dataset described by `spec`. Labels are all 0 (unused for
/// dimension estimation); two calls with the same spec are identical.
pub fn generate(spec: &SyntheticSpec) -> Result<Dataset> {
    if spec.ambient_dim == 0 || spec.n_samples == 0 {
        return Err(Error::InvalidDataset(
            "synthetic spec needs ambient_dim >= 1 and n_samples >= 1".into(),
        ));
    }
    let d = spec.ambient_dim;
    let s = spec.n_samples;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let feature_names: Vec<String> = (0..d).map(|j| format!("x{j}")).collect();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(s);
    let name;
    match spec.kind {
        SyntheticKind::UniformCube => {
            name = format!("cube_d{d}_s{s}");
            for _ in 0..s {
                rows.push((0..d).map(|_| rng.gen::<f64>()).collect());
            }
        }
        SyntheticKind::EmbeddedLine => {
            name = format!("line_d{d}_s{s}");
            let mut direction: Vec<f64> =
                (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
            for v in &mut direction {
                *v /= norm;
            }
            let offset: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
            for _ in 0..s {
                let t = rng.gen::<f64>();
                rows.push(
                    direction
                        .iter()
                        .zip(&offset)
                        .map(|(&v, &b)| t * v + b)
                        .collect(),
                );
            }
        }
    }
    let labels = vec![0u8; s];
    Dataset::from_rows(name, feature_names, &rows, labels)
}

/// Two well-separated Gaussian blobs in 2-D: the positive class (fraction
/// `positive_fraction`) sits at (4, 4) and the negative class at (0, 0), both
/// with standard deviation 0.2, so the line x + y = 4 separates them with a
/// wide margin. Handy for learner smoke tests and examples.
pub fn two_gaussian_blobs(n: usize, positive_fraction: f64, seed: u64) -> Result<Dataset> {
    if n == 0 || !(0.0..=1.0).contains(&positive_fraction) {
        return Err(Error::InvalidDataset(
            "blobs need n >= 1 and positive_fraction in [0,1]".into(),
        ));
    }
    let n_pos = ((n as f64) * positive_fraction).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let positive = i < n_pos;
        let center = if positive { 4.0 } else { 0.0 };
        let x: f64 = center + 0.2 * rng.sample::<f64, _>(StandardNormal);
        let y: f64 = center + 0.2 * rng.sample::<f64, _>(StandardNormal);
        rows.push(vec![x, y]);
        labels.push(u8::from(positive));
    }
    let data = Dataset::from_rows(
        format!("blobs_n{n}"),
        vec!["x0".into(), "x1".into()],
        &rows,
        labels,
    )?;
    Ok(data.shuffle(seed ^ 0x9e37_79b9_7f4a_7c15))
}

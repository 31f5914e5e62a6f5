//! Intrinsic dimensionality estimation via the correlation-integral
//! box-counting method.
//!
//! The correlation integral counts, for a growing radius r, the fraction of
//! instance pairs closer than r:
//!
//! ```text
//! C(r) = 2 / (N (N - 1)) * |{ (i, j), i < j : dist(x_i, x_j) < r }|
//! ```
//!
//! If the points fill d latent dimensions, C(r) grows like r^d in the
//! scaling regime, so the slope of ln C(r) against ln r is the dimension.
//! The estimator builds C(r) over a log-spaced radius schedule, takes the
//! consecutive log-log slopes, smooths them with a short centered moving
//! average, and reports the maximum smoothed slope.
//!
//! Everything here is exact and deterministic: all N(N-1)/2 pairwise
//! distances are computed (no sampling), and pair counting is an integer
//! reduction, so the result does not depend on evaluation order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Distance used for pair counting. L1 is the default: it behaves better
/// than L2 on high-dimensional raw feature tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
}

impl std::fmt::Display for Norm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Norm::L1 => write!(f, "l1"),
            Norm::L2 => write!(f, "l2"),
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            other => Err(Error::UnknownName {
                what: "norm",
                value: other.to_string(),
                options: "l1, l2",
            }),
        }
    }
}

/// All unordered-pair distances of a dataset, sorted ascending. Exact: no
/// subsampling. Needs at least 2 rows.
pub fn pairwise_distances(data: &Dataset, norm: Norm) -> Result<Vec<f64>> {
    let n = data.n_rows();
    if n < 2 {
        return Err(Error::TooFewRows { needed: 2, got: n });
    }
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        let a = data.row(i);
        for j in (i + 1)..n {
            let b = data.row(j);
            out.push(distance(a, b, norm));
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn distance(a: &[f64], b: &[f64], norm: Norm) -> f64 {
    match norm {
        Norm::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        Norm::L2 => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
    }
}

/// C(r) from a sorted distance vector: the pair count uses the strict
/// indicator dist < r, so a pair exactly at r does not contribute.
pub fn correlation_integral(sorted_distances: &[f64], n: usize, r: f64) -> f64 {
    let count = count_within(sorted_distances, r);
    2.0 * count as f64 / (n as f64 * (n as f64 - 1.0))
}

fn count_within(sorted_distances: &[f64], r: f64) -> u64 {
    sorted_distances.partition_point(|&d| d < r) as u64
}

/// Log-spaced radii at which the correlation integral is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSchedule {
    log_start: f64,
    log_end: f64,
    radii: Vec<f64>,
}

impl RadiusSchedule {
    /// `steps` radii spaced evenly in log space between exp(log_start) and
    /// exp(log_end).
    pub fn log_spaced(log_start: f64, log_end: f64, steps: usize) -> Result<Self> {
        if steps < 4 {
            return Err(Error::InvalidSchedule(format!(
                "need at least 4 steps, got {steps}"
            )));
        }
        if !(log_start.is_finite() && log_end.is_finite()) || log_end <= log_start {
            return Err(Error::InvalidSchedule(format!(
                "log range [{log_start}, {log_end}] is not finite and increasing"
            )));
        }
        let dx = (log_end - log_start) / (steps - 1) as f64;
        let radii: Vec<f64> = (0..steps)
            .map(|k| (log_start + k as f64 * dx).exp())
            .collect();
        Self::from_radii(radii)
    }

    /// Wrap an explicit radius vector; it must be strictly increasing and
    /// positive with at least 4 entries.
    pub fn from_radii(radii: Vec<f64>) -> Result<Self> {
        if radii.len() < 4 {
            return Err(Error::InvalidSchedule(format!(
                "need at least 4 radii, got {}",
                radii.len()
            )));
        }
        if radii[0] <= 0.0 || !radii[0].is_finite() {
            return Err(Error::InvalidSchedule("radii must be positive".into()));
        }
        for w in radii.windows(2) {
            if !(w[1].is_finite() && w[1] > w[0]) {
                return Err(Error::InvalidSchedule(
                    "radii must be strictly increasing".into(),
                ));
            }
        }
        Ok(RadiusSchedule {
            log_start: radii[0].ln(),
            log_end: radii[radii.len() - 1].ln(),
            radii,
        })
    }

    pub fn log_start(&self) -> f64 {
        self.log_start
    }

    pub fn log_end(&self) -> f64 {
        self.log_end
    }

    pub fn steps(&self) -> usize {
        self.radii.len()
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Same schedule with every radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_radii(self.radii.iter().map(|r| r * factor).collect())
    }
}

/// Fraction of the smallest positive pair distances skipped when choosing the
/// default schedule start. Slopes taken where only a handful of pairs are
/// inside the radius are dominated by counting noise; starting the schedule
/// at this quantile keeps the slope estimates in the populated regime.
pub const DEFAULT_START_QUANTILE: f64 = 0.001;

/// Number of radii in the default schedule.
pub const DEFAULT_STEPS: usize = 50;

/// Default schedule for a sorted distance vector: log-spaced from the
/// 0.1%-quantile positive distance (the smallest positive distance for small
/// inputs) up to 1.01x the largest distance, so the curve always reaches
/// C(r) = 1. Zero distances (duplicate rows) are skipped; if every distance
/// is zero there is no scale to work with and this fails.
pub fn default_schedule(sorted_distances: &[f64], steps: usize) -> Result<RadiusSchedule> {
    let first_pos = sorted_distances.partition_point(|&d| d <= 0.0);
    if first_pos == sorted_distances.len() {
        return Err(Error::ZeroDiameter);
    }
    let positive = &sorted_distances[first_pos..];
    let offset = ((positive.len() as f64 * DEFAULT_START_QUANTILE).ceil() as usize).max(1) - 1;
    let log_start = positive[offset].ln();
    let log_end = sorted_distances[sorted_distances.len() - 1].ln() + 1.01f64.ln();
    RadiusSchedule::log_spaced(log_start, log_end, steps)
}

/// The correlation integral evaluated over a schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCurve {
    pub radii: Vec<f64>,
    /// C(r) per radius, non-decreasing, each exactly 2*pairs/(N(N-1)).
    pub c_values: Vec<f64>,
    /// Raw pair counts per radius.
    pub pair_counts: Vec<u64>,
    pub norm: Norm,
}

/// Estimator output: the dimension value plus every intermediate needed to
/// plot or audit the log-log curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    /// max of `smoothed_slopes`.
    pub value: f64,
    /// Raw log-log slopes between consecutive usable radii.
    pub slopes: Vec<f64>,
    pub smoothed_slopes: Vec<f64>,
    pub curve: CorrelationCurve,
    /// Radii with C(r) > 0, i.e. the points the slopes are taken over.
    pub usable_points: usize,
}

/// Options for [`estimate_dimension`]. The defaults reproduce the standard
/// protocol: L1 distances, 50 radii, smoothing window 3, raw features.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    pub norm: Norm,
    pub steps: usize,
    /// Centered moving-average width over the slopes; must be odd.
    pub window: usize,
    /// Min-max scale each feature to [0,1] before computing distances.
    pub normalize: bool,
    /// Evaluate on these radii instead of the data-derived default schedule.
    pub schedule: Option<RadiusSchedule>,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            norm: Norm::L1,
            steps: DEFAULT_STEPS,
            window: 3,
            normalize: false,
            schedule: None,
        }
    }
}

/// Estimate the intrinsic dimension of `data`.
///
/// Radii where C(r) = 0 are dropped (their logs are undefined); at least 3
/// usable radii must remain. The estimate is the maximum of the smoothed
/// log-log slope sequence.
pub fn estimate_dimension(data: &Dataset, config: &EstimatorConfig) -> Result<DimensionEstimate> {
    if data.n_rows() < 3 {
        return Err(Error::TooFewRows {
            needed: 3,
            got: data.n_rows(),
        });
    }
    if config.window == 0 || config.window.is_multiple_of(2) {
        return Err(Error::InvalidWindow(config.window));
    }
    let normalized;
    let data = if config.normalize {
        normalized = data.min_max_normalized();
        &normalized
    } else {
        data
    };

    let distances = pairwise_distances(data, config.norm)?;
    let schedule = match &config.schedule {
        Some(s) => s.clone(),
        None => default_schedule(&distances, config.steps)?,
    };

    let n = data.n_rows();
    let pair_counts: Vec<u64> = schedule
        .radii()
        .iter()
        .map(|&r| count_within(&distances, r))
        .collect();
    let c_values: Vec<f64> = pair_counts
        .iter()
        .map(|&c| 2.0 * c as f64 / (n as f64 * (n as f64 - 1.0)))
        .collect();
    let curve = CorrelationCurve {
        radii: schedule.radii().to_vec(),
        c_values,
        pair_counts,
        norm: config.norm,
    };

    let first_usable = curve.pair_counts.partition_point(|&c| c == 0);
    let usable_points = curve.radii.len() - first_usable;
    if usable_points < 3 {
        return Err(Error::CurveTooSparse {
            usable: usable_points,
        });
    }

    let r = &curve.radii[first_usable..];
    let c = &curve.c_values[first_usable..];
    let slopes: Vec<f64> = (0..usable_points - 1)
        .map(|k| (c[k + 1] / c[k]).ln() / (r[k + 1] / r[k]).ln())
        .collect();
    let smoothed_slopes = moving_average(&slopes, config.window);
    let value = smoothed_slopes.iter().copied().fold(f64::MIN, f64::max);

    Ok(DimensionEstimate {
        value,
        slopes,
        smoothed_slopes,
        curve,
        usable_points,
    })
}

/// Centered moving average with the window truncated at both edges.
fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    (0..values.len())
        .map(|k| {
            let lo = k.saturating_sub(half);
            let hi = (k + half + 1).min(values.len());
            let span = &values[lo..hi];
            span.iter().sum::<f64>() / span.len() as f64
        })
        .collect()
}

/// One-line machine-readable summary of an estimate, for the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateSummary {
    pub dataset: String,
    pub norm: Norm,
    pub steps: usize,
    pub window: usize,
    pub value: f64,
    pub usable_points: usize,
}

impl EstimateSummary {
    pub fn new(dataset: &str, config: &EstimatorConfig, estimate: &DimensionEstimate) -> Self {
        EstimateSummary {
            dataset: dataset.to_string(),
            norm: config.norm,
            steps: estimate.curve.radii.len(),
            window: config.window,
            value: estimate.value,
            usable_points: estimate.usable_points,
        }
    }
}

/// Write the usable part of the log-log curve as CSV with columns
/// `ln_r,ln_C,slope,smoothed_slope`. The first row has empty slope cells;
/// floats are written round-trip exact.
pub fn export_curve(estimate: &DimensionEstimate, path: &Path) -> Result<()> {
    std::fs::write(path, curve_csv(estimate)).map_err(|e| Error::io(path, e))
}

pub(crate) fn curve_csv(estimate: &DimensionEstimate) -> String {
    let first = estimate.curve.radii.len() - estimate.usable_points;
    let mut out = String::from("ln_r,ln_C,slope,smoothed_slope\n");
    for k in 0..estimate.usable_points {
        let ln_r = estimate.curve.radii[first + k].ln();
        let ln_c = estimate.curve.c_values[first + k].ln();
        if k == 0 {
            out.push_str(&format!("{ln_r},{ln_c},,\n"));
        } else {
            out.push_str(&format!(
                "{ln_r},{ln_c},{},{}\n",
                estimate.slopes[k - 1],
                estimate.smoothed_slopes[k - 1]
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate, Dataset, SyntheticKind, SyntheticSpec};

    fn points(rows: &[Vec<f64>]) -> Dataset {
        let f = rows[0].len();
        let names = (0..f).map(|j| format!("x{j}")).collect();
        Dataset::from_rows("t", names, rows, vec![0; rows.len()]).unwrap()
    }

    /// Independent oracle: count pairs within r with a plain double loop.
    fn brute_force_count(data: &Dataset, norm: Norm, r: f64) -> u64 {
        let mut count = 0;
        for i in 0..data.n_rows() {
            for j in (i + 1)..data.n_rows() {
                if distance(data.row(i), data.row(j), norm) < r {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn single_pair_l1_and_l2() {
        let d = points(&[vec![0.0, 0.0], vec![3.0, 4.0]]);
        assert_eq!(pairwise_distances(&d, Norm::L1).unwrap(), vec![7.0]);
        assert_eq!(pairwise_distances(&d, Norm::L2).unwrap(), vec![5.0]);
    }

    #[test]
    fn collinear_points_distances() {
        let d = points(&[vec![0.0], vec![1.0], vec![2.0]]);
        assert_eq!(pairwise_distances(&d, Norm::L1).unwrap(), vec![1.0, 1.0, 2.0]);
    }

    #[test]
    fn distances_match_double_loop_oracle() {
        let spec = SyntheticSpec {
            kind: SyntheticKind::UniformCube,
            ambient_dim: 4,
            n_samples: 50,
            seed: 99,
        };
        let data = generate(&spec).unwrap();
        for norm in [Norm::L1, Norm::L2] {
            let sorted = pairwise_distances(&data, norm).unwrap();
            let mut oracle: Vec<f64> = Vec::new();
            for i in 0..50 {
                for j in (i + 1)..50 {
                    oracle.push(distance(data.row(i), data.row(j), norm));
                }
            }
            oracle.sort_by(f64::total_cmp);
            assert_eq!(sorted, oracle);
        }
    }

    #[test]
    fn rejects_single_row() {
        let d = points(&[vec![1.0]]);
        assert!(matches!(
            pairwise_distances(&d, Norm::L1),
            Err(Error::TooFewRows { .. })
        ));
    }

    #[test]
    fn correlation_integral_all_pairs_inside() {
        let d = points(&[vec![0.0], vec![3.0]]);
        let sorted = pairwise_distances(&d, Norm::L1).unwrap();
        assert_eq!(correlation_integral(&sorted, 2, 5.0), 1.0);
    }

    #[test]
    fn correlation_integral_counts_two_thirds() {
        let d = points(&[vec![0.0], vec![1.0], vec![2.0]]);
        let sorted = pairwise_distances(&d, Norm::L1).unwrap();
        assert_eq!(correlation_integral(&sorted, 3, 1.5), 2.0 / 3.0);
    }

    #[test]
    fn correlation_integral_is_strict_at_boundary() {
        let d = points(&[vec![0.0], vec![1.0], vec![2.0]]);
        let sorted = pairwise_distances(&d, Norm::L1).unwrap();
        // r equal to the minimum pairwise distance counts nothing at 1.0
        assert_eq!(correlation_integral(&sorted, 3, 1.0), 0.0);
    }

    #[test]
    fn default_schedule_spans_min_to_just_past_max() {
        let distances = vec![1.0, std::f64::consts::E.powi(2), std::f64::consts::E.powi(4)];
        let s = default_schedule(&distances, 5).unwrap();
        assert_eq!(s.steps(), 5);
        assert!((s.radii()[0] - 1.0).abs() < 1e-12);
        let last = s.radii()[4];
        assert!((last - 1.01 * std::f64::consts::E.powi(4)).abs() / last < 1e-12);
    }

    #[test]
    fn default_schedule_skips_zero_distances() {
        let s = default_schedule(&[0.0, 0.0, 2.0], 10).unwrap();
        assert!((s.log_start() - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn default_schedule_rejects_zero_diameter() {
        assert!(matches!(
            default_schedule(&[0.0, 0.0, 0.0], 10),
            Err(Error::ZeroDiameter)
        ));
    }

    #[test]
    fn schedule_validation() {
        assert!(RadiusSchedule::from_radii(vec![1.0, 2.0, 3.0]).is_err());
        assert!(RadiusSchedule::from_radii(vec![0.0, 1.0, 2.0, 3.0]).is_err());
        assert!(RadiusSchedule::from_radii(vec![1.0, 1.0, 2.0, 3.0]).is_err());
        assert!(RadiusSchedule::log_spaced(0.0, 0.0, 10).is_err());
        assert!(RadiusSchedule::log_spaced(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn estimate_requires_three_rows() {
        let d = points(&[vec![0.0], vec![1.0]]);
        assert!(matches!(
            estimate_dimension(&d, &EstimatorConfig::default()),
            Err(Error::TooFewRows { needed: 3, .. })
        ));
    }

    #[test]
    fn estimate_rejects_even_window() {
        let d = points(&[vec![0.0], vec![1.0], vec![2.0], vec![4.0]]);
        let config = EstimatorConfig {
            window: 2,
            ..EstimatorConfig::default()
        };
        assert!(matches!(
            estimate_dimension(&d, &config),
            Err(Error::InvalidWindow(2))
        ));
    }

    #[test]
    fn estimate_rejects_sparse_curve() {
        let d = points(&[vec![0.0], vec![10.0], vec![20.0]]);
        // all radii but the last two sit below the smallest distance
        let schedule = RadiusSchedule::from_radii(vec![0.1, 0.2, 15.0, 100.0]).unwrap();
        let config = EstimatorConfig {
            schedule: Some(schedule),
            ..EstimatorConfig::default()
        };
        assert!(matches!(
            estimate_dimension(&d, &config),
            Err(Error::CurveTooSparse { usable: 2 })
        ));
    }

    #[test]
    fn curve_is_monotone_and_ends_at_one() {
        let spec = SyntheticSpec {
            kind: SyntheticKind::UniformCube,
            ambient_dim: 3,
            n_samples: 60,
            seed: 4,
        };
        let data = generate(&spec).unwrap();
        let est = estimate_dimension(&data, &EstimatorConfig::default()).unwrap();
        for w in est.curve.pair_counts.windows(2) {
            assert!(w[0] <= w[1]);
        }
        assert_eq!(*est.curve.c_values.last().unwrap(), 1.0);
        assert_eq!(est.slopes.len(), est.usable_points - 1);
        let max = est
            .smoothed_slopes
            .iter()
            .copied()
            .fold(f64::MIN, f64::max);
        assert_eq!(est.value, max);
    }

    #[test]
    fn counts_match_oracle_on_schedule() {
        let spec = SyntheticSpec {
            kind: SyntheticKind::UniformCube,
            ambient_dim: 2,
            n_samples: 40,
            seed: 11,
        };
        let data = generate(&spec).unwrap();
        for norm in [Norm::L1, Norm::L2] {
            let config = EstimatorConfig {
                norm,
                ..EstimatorConfig::default()
            };
            let est = estimate_dimension(&data, &config).unwrap();
            for (k, &r) in est.curve.radii.iter().enumerate() {
                assert_eq!(est.curve.pair_counts[k], brute_force_count(&data, norm, r));
            }
        }
    }

    #[test]
    fn embedded_line_estimates_near_one() {
        let spec = SyntheticSpec {
            kind: SyntheticKind::EmbeddedLine,
            ambient_dim: 10,
            n_samples: 1000,
            seed: 0,
        };
        let data = generate(&spec).unwrap();
        let est = estimate_dimension(&data, &EstimatorConfig::default()).unwrap();
        assert!(
            (0.8..=1.3).contains(&est.value),
            "line estimate {}",
            est.value
        );
    }

    #[test]
    fn duplicate_row_does_not_inflate_line_estimate() {
        let spec = SyntheticSpec {
            kind: SyntheticKind::EmbeddedLine,
            ambient_dim: 10,
            n_samples: 500,
            seed: 3,
        };
        let data = generate(&spec).unwrap();
        let mut rows: Vec<Vec<f64>> = data.rows().map(|r| r.to_vec()).collect();
        rows.push(rows[0].clone());
        let with_dup = Dataset::from_rows(
            "dup",
            data.feature_names().to_vec(),
            &rows,
            vec![0; rows.len()],
        )
        .unwrap();
        let est = estimate_dimension(&with_dup, &EstimatorConfig::default()).unwrap();
        assert!(est.value <= 1.3, "duplicate inflated estimate to {}", est.value);
    }

    #[test]
    fn estimate_is_row_permutation_invariant() {
        let spec = SyntheticSpec {
            kind: SyntheticKind::UniformCube,
            ambient_dim: 3,
            n_samples: 80,
            seed: 21,
        };
        let data = generate(&spec).unwrap();
        let shuffled = data.shuffle(77);
        let a = estimate_dimension(&data, &EstimatorConfig::default()).unwrap();
        let b = estimate_dimension(&shuffled, &EstimatorConfig::default()).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.curve.pair_counts, b.curve.pair_counts);
    }

    #[test]
    fn power_of_two_scaling_is_bit_exact() {
        let spec = SyntheticSpec {
            kind: SyntheticKind::UniformCube,
            ambient_dim: 4,
            n_samples: 50,
            seed: 8,
        };
        let data = generate(&spec).unwrap();
        let base = estimate_dimension(&data, &EstimatorConfig::default()).unwrap();
        let schedule = RadiusSchedule::from_radii(base.curve.radii.clone()).unwrap();

        let factor = 1024.0; // 2^10: exact in floating point
        let rows: Vec<Vec<f64>> = data
            .rows()
            .map(|r| r.iter().map(|v| v * factor).collect())
            .collect();
        let scaled_data = Dataset::from_rows(
            "scaled",
            data.feature_names().to_vec(),
            &rows,
            vec![0; data.n_rows()],
        )
        .unwrap();
        let config = EstimatorConfig {
            schedule: Some(schedule.scaled(factor).unwrap()),
            ..EstimatorConfig::default()
        };
        let scaled = estimate_dimension(&scaled_data, &config).unwrap();
        assert_eq!(base.curve.pair_counts, scaled.curve.pair_counts);
        assert_eq!(base.slopes, scaled.slopes);
        assert_eq!(base.value, scaled.value);
    }

    #[test]
    fn normalization_flag_rescales_mixed_features() {
        // a 2-D cube with one coordinate stretched 1000x: raw L1 distances
        // see only the stretched axis (~1-D), min-max scaling restores ~2-D
        let spec = SyntheticSpec {
            kind: SyntheticKind::UniformCube,
            ambient_dim: 2,
            n_samples: 600,
            seed: 9,
        };
        let cube = generate(&spec).unwrap();
        let rows: Vec<Vec<f64>> = cube.rows().map(|r| vec![r[0], 1000.0 * r[1]]).collect();
        let stretched = Dataset::from_rows(
            "stretched",
            cube.feature_names().to_vec(),
            &rows,
            vec![0; cube.n_rows()],
        )
        .unwrap();

        let raw = estimate_dimension(&stretched, &EstimatorConfig::default()).unwrap();
        assert!(raw.value < 1.5, "raw estimate {}", raw.value);

        let config = EstimatorConfig {
            normalize: true,
            ..EstimatorConfig::default()
        };
        let scaled = estimate_dimension(&stretched, &config).unwrap();
        assert!(
            (1.6..=2.5).contains(&scaled.value),
            "normalized estimate {}",
            scaled.value
        );
    }

    #[test]
    fn moving_average_truncates_at_edges() {
        let v = vec![1.0, 2.0, 3.0, 4.0];
        assert_eq!(moving_average(&v, 3), vec![1.5, 2.0, 3.0, 3.5]);
        assert_eq!(moving_average(&v, 1), v);
    }

    #[test]
    fn curve_csv_round_trips_smoothed_slopes() {
        let spec = SyntheticSpec {
            kind: SyntheticKind::UniformCube,
            ambient_dim: 2,
            n_samples: 30,
            seed: 14,
        };
        let data = generate(&spec).unwrap();
        let est = estimate_dimension(&data, &EstimatorConfig::default()).unwrap();
        let csv = curve_csv(&est);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "ln_r,ln_C,slope,smoothed_slope");
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), est.usable_points);
        assert!(rows[0].ends_with(",,"));
        let mut reparsed = Vec::new();
        for row in &rows[1..] {
            let cell = row.split(',').nth(3).unwrap();
            reparsed.push(cell.parse::<f64>().unwrap());
        }
        assert_eq!(reparsed, est.smoothed_slopes);
        let max_col = reparsed.iter().copied().fold(f64::MIN, f64::max);
        assert_eq!(max_col, est.value);
    }
}

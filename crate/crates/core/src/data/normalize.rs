use serde::{Deserialize, Serialize};

use super::Dataset;

/// Per-feature affine transform learned on one dataset and replayable on
/// another (e.g. the holdout split).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationStats {
    pub mean: Vec<f64>,
    pub std_dev: Vec<f64>,
}

// Columns whose spread is below this (relative to their magnitude) count as constant.
const DEGENERATE_REL_SD: f64 = 1e-9;

impl NormalizationStats {
    pub fn fit(ds: &Dataset) -> Self {
        let d = ds.dim();
        let n = ds.len() as f64;
        let mut mean = vec![0.0f64; d];
        for (x, _) in ds.rows() {
            for (m, &v) in mean.iter_mut().zip(x) {
                *m += v as f64;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0f64; d];
        for (x, _) in ds.rows() {
            for ((s, &v), m) in var.iter_mut().zip(x).zip(&mean) {
                let c = v as f64 - m;
                *s += c * c;
            }
        }
        let std_dev = var.into_iter().map(|s| (s / n).sqrt()).collect();
        NormalizationStats { mean, std_dev }
    }

    fn is_degenerate(&self, j: usize) -> bool {
        self.std_dev[j] <= DEGENERATE_REL_SD * self.mean[j].abs().max(1.0)
    }

    /// Apply the stored transform. Constant columns map to 0.
    pub fn apply(&self, ds: &Dataset) -> Dataset {
        assert_eq!(
            ds.dim(),
            self.mean.len(),
            "normalization dimension mismatch"
        );
        let d = ds.dim();
        let features = ds
            .features()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let j = i % d;
                if self.is_degenerate(j) {
                    0.0
                } else {
                    ((v as f64 - self.mean[j]) / self.std_dev[j]) as f32
                }
            })
            .collect();
        let mut out = ds.clone();
        out.features = features;
        out
    }
}

/// Standardize every feature column to zero mean and unit variance.
pub fn normalize_features(ds: &Dataset) -> (Dataset, NormalizationStats) {
    let stats = NormalizationStats::fit(ds);
    (stats.apply(ds), stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(values: &[f32]) -> Dataset {
        Dataset::new("c", values.to_vec(), vec![0; values.len()], 1, 2).unwrap()
    }

    #[test]
    fn two_point_column() {
        let (out, stats) = normalize_features(&column(&[1.0, 3.0]));
        assert_eq!(out.features(), &[-1.0, 1.0]);
        assert_eq!(stats.mean, vec![2.0]);
        assert_eq!(stats.std_dev, vec![1.0]);
    }

    #[test]
    fn constant_column_maps_to_zero() {
        let (out, _) = normalize_features(&column(&[5.0, 5.0, 5.0]));
        assert_eq!(out.features(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn idempotent() {
        let ds = Dataset::new(
            "m",
            vec![0.3, 10.0, 7.0, -1.5, 10.0, 2.0, 4.0, 10.0, 9.5],
            vec![0, 1, 0],
            3,
            2,
        )
        .unwrap();
        let (once, _) = normalize_features(&ds);
        let (twice, _) = normalize_features(&once);
        for (a, b) in once.features().iter().zip(twice.features()) {
            assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
        }
        // middle column was constant
        assert!(twice
            .features()
            .iter()
            .skip(1)
            .step_by(3)
            .all(|&v| v == 0.0));
    }

    #[test]
    fn replay_on_other_data() {
        let (_, stats) = normalize_features(&column(&[1.0, 3.0]));
        let other = stats.apply(&column(&[2.0, 5.0]));
        assert_eq!(other.features(), &[0.0, 3.0]);
    }
}

//! Datasets of labeled representation vectors.

mod gf2;
mod io;
mod normalize;
mod synth;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::rng::RandomStream;

pub use gf2::{gf2_solve, BitMatrix, BitVector, Gf2Error, Gf2Solution};
pub use io::{load_dataset, save_dataset, DatasetFormat, BINARY_MAGIC, BINARY_VERSION};
pub use normalize::{normalize_features, NormalizationStats};
pub use synth::{
    binary_entropy, gaussian_bayes_loss, gen_gaussian_task, gen_parity, linear_independence_prob,
    ParityRepr, ParitySpec,
};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("dataset must contain at least one example and one feature (n={n}, d={d})")]
    Empty { n: usize, d: usize },
    #[error("dataset needs at least 2 classes, got {0}")]
    TooFewClasses(u32),
    #[error("feature matrix has {got} values, expected n*d = {expected}")]
    ShapeMismatch { got: usize, expected: usize },
    #[error("record {index}: label {label} out of range for {num_classes} classes")]
    LabelOutOfRange {
        index: usize,
        label: u32,
        num_classes: u32,
    },
    #[error("record {index}, feature {feature}: non-finite value {value}")]
    NonFinite {
        index: usize,
        feature: usize,
        value: f32,
    },
    #[error("oracle loss must be finite and non-negative, got {0}")]
    BadOracleLoss(f64),
    #[error("malformed binary dataset at byte {offset}: {message}")]
    Format { offset: usize, message: String },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("invalid synthetic task parameters: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `n` labeled feature vectors with class labels in `[0, num_classes)`.
///
/// Values are validated on construction and immutable afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    name: String,
    features: Vec<f32>,
    labels: Vec<u32>,
    dim: usize,
    num_classes: u32,
    oracle_loss: Option<f64>,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        features: Vec<f32>,
        labels: Vec<u32>,
        dim: usize,
        num_classes: u32,
    ) -> Result<Self, DataError> {
        let n = labels.len();
        if n == 0 || dim == 0 {
            return Err(DataError::Empty { n, d: dim });
        }
        if features.len() != n * dim {
            return Err(DataError::ShapeMismatch {
                got: features.len(),
                expected: n * dim,
            });
        }
        if num_classes < 2 {
            return Err(DataError::TooFewClasses(num_classes));
        }
        if let Some((index, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= num_classes) {
            return Err(DataError::LabelOutOfRange {
                index,
                label,
                num_classes,
            });
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(DataError::NonFinite {
                index: pos / dim,
                feature: pos % dim,
                value: features[pos],
            });
        }
        Ok(Dataset {
            name: name.into(),
            features,
            labels,
            dim,
            num_classes,
            oracle_loss: None,
        })
    }

    /// Attach the known Bayes negative log-likelihood, in nats.
    pub fn with_oracle_loss(mut self, loss: f64) -> Result<Self, DataError> {
        if !loss.is_finite() || loss < 0.0 {
            return Err(DataError::BadOracleLoss(loss));
        }
        self.oracle_loss = Some(loss);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false for a constructed dataset; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_classes(&self) -> u32 {
        self.num_classes
    }

    pub fn oracle_loss(&self) -> Option<f64> {
        self.oracle_loss
    }

    /// Row-major `n × d` feature matrix.
    pub fn features(&self) -> &[f32] {
        &self.features
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[f32], u32)> + '_ {
        self.features
            .chunks_exact(self.dim)
            .zip(self.labels.iter().copied())
    }

    /// New dataset made of the given rows (repeats allowed), keeping
    /// name, class count and oracle loss.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.dim);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            name: self.name.clone(),
            features,
            labels,
            dim: self.dim,
            num_classes: self.num_classes,
            oracle_loss: self.oracle_loss,
        }
    }

    /// Split off a holdout of `round(fraction * n)` examples (at least one),
    /// chosen by a random permutation. Returns `(pool, holdout)`.
    pub fn split_holdout(
        &self,
        fraction: f64,
        stream: &RandomStream,
    ) -> Result<(Dataset, Dataset), DataError> {
        let n = self.len();
        let k = ((fraction * n as f64).round() as usize).max(1);
        if !(fraction > 0.0 && fraction < 1.0) || k >= n {
            return Err(DataError::InvalidSpec(format!(
                "holdout fraction {fraction} leaves no pool for {n} examples"
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = stream.rng();
        // Fisher-Yates
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        let holdout = self.select(&order[..k]);
        let pool = self.select(&order[k..]);
        Ok((pool, holdout))
    }

    /// True if every feature value is exactly 0.0 or 1.0.
    pub fn is_binary(&self) -> bool {
        self.features.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// Hex SHA-256 over the canonical binary encoding (first 16 hex digits).
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(io::encode_binary(self));
        hex::encode(&hasher.finalize()[..8])
    }
}

/// Draw `n` examples i.i.d. with replacement. Deterministic given `stream`.
pub fn bootstrap_subsample(ds: &Dataset, n: usize, stream: &RandomStream) -> Dataset {
    assert!(n >= 1, "bootstrap size must be positive");
    let mut rng = stream.rng();
    let indices: Vec<usize> = (0..n).map(|_| rng.random_range(0..ds.len())).collect();
    ds.select(&indices)
}

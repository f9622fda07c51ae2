//! Sources of per-replicate losses at a given training-set size.

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CurveError, LossMetric};
use crate::data::{bootstrap_subsample, Dataset};
use crate::probe::{evaluate_accuracy, evaluate_loss, train, LearningAlgorithm};
use crate::rng::RandomStream;

/// Draws one realization of the loss of `𝒜` trained on `n` examples.
///
/// Each call must depend only on `(n, stream)` so that replicates can be
/// evaluated in any order or in parallel.
pub trait LossSampler: Sync {
    /// Upper bound `B` on every sampled loss.
    fn loss_bound(&self) -> f64;
    fn num_classes(&self) -> u32;
    fn metric(&self) -> LossMetric;
    fn algorithm_fingerprint(&self) -> String;
    fn dataset_fingerprint(&self) -> String;
    /// Size of the pool subsamples are drawn from, if finite.
    fn pool_size(&self) -> Option<usize> {
        None
    }
    fn sample_loss(&self, n: usize, stream: &RandomStream) -> Result<f64, CurveError>;
}

pub(crate) fn short_hash(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

/// Bootstrap a training set from the pool, train, and evaluate on a fixed
/// holdout.
#[derive(Debug, Clone)]
pub struct ProbeSampler {
    pub algorithm: LearningAlgorithm,
    pub pool: Dataset,
    pub holdout: Dataset,
    pub loss_cap: f64,
    pub metric: LossMetric,
}

impl LossSampler for ProbeSampler {
    fn loss_bound(&self) -> f64 {
        match self.metric {
            LossMetric::Nll => self.loss_cap,
            LossMetric::ZeroOne => 1.0,
        }
    }

    fn num_classes(&self) -> u32 {
        self.pool.num_classes()
    }

    fn metric(&self) -> LossMetric {
        self.metric
    }

    fn algorithm_fingerprint(&self) -> String {
        short_hash(serde_json::to_string(&self.algorithm).unwrap().as_bytes())
    }

    fn dataset_fingerprint(&self) -> String {
        short_hash(format!("{}+{}", self.pool.fingerprint(), self.holdout.fingerprint()).as_bytes())
    }

    fn pool_size(&self) -> Option<usize> {
        Some(self.pool.len())
    }

    fn sample_loss(&self, n: usize, stream: &RandomStream) -> Result<f64, CurveError> {
        let train_set = bootstrap_subsample(&self.pool, n, &stream.derive("bootstrap", 0));
        let pred = train(&self.algorithm, &train_set, &stream.derive("train", 0))?;
        Ok(match self.metric {
            LossMetric::Nll => evaluate_loss(&pred, &self.holdout, self.loss_cap)?,
            LossMetric::ZeroOne => 1.0 - evaluate_accuracy(&pred, &self.holdout)?,
        })
    }
}

/// Closed-form expected loss curves, for checking measures against
/// hand-computed values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum StubCurve {
    /// `scale / n`
    Inverse {
        scale: f64,
    },
    /// `floor + scale · n^(-exponent)`
    PowerLaw {
        floor: f64,
        scale: f64,
        exponent: f64,
    },
    Constant {
        value: f64,
    },
    /// `before` for `n < switch_at`, `after` from then on.
    Step {
        before: f64,
        after: f64,
        switch_at: usize,
    },
}

impl StubCurve {
    pub fn loss(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            StubCurve::Inverse { scale } => scale / n,
            StubCurve::PowerLaw {
                floor,
                scale,
                exponent,
            } => floor + scale * n.powf(-exponent),
            StubCurve::Constant { value } => value,
            StubCurve::Step {
                before,
                after,
                switch_at,
            } => {
                if n < switch_at as f64 {
                    before
                } else {
                    after
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StubNoise {
    /// Every replicate returns the exact expected loss.
    None,
    /// Each replicate returns `B · Bernoulli(L(n)/B)`: bounded, unbiased,
    /// like the loss on a single held-out example.
    Bernoulli,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StubSampler {
    pub curve: StubCurve,
    pub noise: StubNoise,
    pub bound: f64,
    pub num_classes: u32,
}

impl StubSampler {
    pub fn exact(curve: StubCurve) -> Self {
        StubSampler {
            curve,
            noise: StubNoise::None,
            bound: 1.0,
            num_classes: 2,
        }
    }

    pub fn noisy(curve: StubCurve) -> Self {
        StubSampler {
            noise: StubNoise::Bernoulli,
            ..StubSampler::exact(curve)
        }
    }

    /// Expected loss, clamped to `[0, B]`.
    pub fn expected_loss(&self, n: usize) -> f64 {
        self.curve.loss(n).clamp(0.0, self.bound)
    }
}

impl LossSampler for StubSampler {
    fn loss_bound(&self) -> f64 {
        self.bound
    }

    fn num_classes(&self) -> u32 {
        self.num_classes
    }

    fn metric(&self) -> LossMetric {
        LossMetric::Nll
    }

    fn algorithm_fingerprint(&self) -> String {
        short_hash(serde_json::to_string(self).unwrap().as_bytes())
    }

    fn dataset_fingerprint(&self) -> String {
        "stub".to_string()
    }

    fn sample_loss(&self, n: usize, stream: &RandomStream) -> Result<f64, CurveError> {
        let mean = self.expected_loss(n);
        Ok(match self.noise {
            StubNoise::None => mean,
            StubNoise::Bernoulli => {
                let hit = stream.rng().random::<f64>() < mean / self.bound;
                if hit {
                    self.bound
                } else {
                    0.0
                }
            }
        })
    }
}

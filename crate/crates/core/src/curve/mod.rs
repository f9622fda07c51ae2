//! Loss-data curves: expected validation loss versus training-set size.

mod grid;
mod isotonic;
mod sampler;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{DataError, Dataset, NormalizationStats};
use crate::probe::{LearningAlgorithm, ProbeError};
use crate::rng::RandomStream;

pub use grid::make_grid;
pub use isotonic::monotone_project;
pub use sampler::{LossSampler, ProbeSampler, StubCurve, StubNoise, StubSampler};

pub const CURVE_SCHEMA_VERSION: u32 = 1;

/// Holdouts smaller than this get a warning on the curve.
const SMALL_HOLDOUT: usize = 100;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid evaluation plan: {0}")]
    InvalidPlan(String),
    #[error("holdout is empty")]
    EmptyHoldout,
    #[error("training failed at n={n}, replicate {replicate}: {source}")]
    Task {
        n: usize,
        replicate: usize,
        #[source]
        source: Box<CurveError>,
    },
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("malformed curve: {0}")]
    Malformed(String),
}

/// What each replicate measures on the holdout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossMetric {
    /// Negative log-likelihood in nats, truncated per example at the loss cap.
    #[default]
    Nll,
    /// 0–1 error rate.
    ZeroOne,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalPlan {
    pub grid: Vec<usize>,
    pub replicates: usize,
    /// Per-example NLL cap; `ln K + 5` when unset.
    pub loss_cap: Option<f64>,
    pub holdout_fraction: f64,
    /// Standardize features using pool statistics (trainable probes only).
    pub normalize: bool,
    pub metric: LossMetric,
    pub master_seed: u64,
}

impl Default for EvalPlan {
    fn default() -> Self {
        EvalPlan {
            grid: Vec::new(),
            replicates: 8,
            loss_cap: None,
            holdout_fraction: 0.2,
            normalize: true,
            metric: LossMetric::Nll,
            master_seed: 0,
        }
    }
}

pub fn default_loss_cap(num_classes: u32) -> f64 {
    (num_classes as f64).ln() + 5.0
}

impl EvalPlan {
    pub fn with_grid(grid: Vec<usize>) -> Self {
        EvalPlan {
            grid,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        if self.grid.is_empty() {
            return Err(CurveError::InvalidGrid("grid is empty".into()));
        }
        if self.grid[0] == 0 || self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CurveError::InvalidGrid(format!(
                "sizes must be positive and strictly increasing: {:?}",
                self.grid
            )));
        }
        if self.replicates == 0 {
            return Err(CurveError::InvalidPlan("replicates must be >= 1".into()));
        }
        if let Some(cap) = self.loss_cap {
            if !(cap > 0.0 && cap.is_finite()) {
                return Err(CurveError::InvalidPlan(format!(
                    "loss cap must be > 0, got {cap}"
                )));
            }
        }
        if !(self.holdout_fraction > 0.0 && self.holdout_fraction < 1.0) {
            return Err(CurveError::InvalidPlan(format!(
                "holdout fraction must be in (0, 1), got {}",
                self.holdout_fraction
            )));
        }
        Ok(())
    }

    pub fn resolved_cap(&self, num_classes: u32) -> f64 {
        self.loss_cap
            .unwrap_or_else(|| default_loss_cap(num_classes))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: usize,
    pub replicate_losses: Vec<f64>,
    pub mean_loss: f64,
    /// Sample standard deviation over replicates divided by `√K`; 0 for one replicate.
    pub std_error: f64,
}

impl CurvePoint {
    pub fn from_losses(n: usize, replicate_losses: Vec<f64>) -> Self {
        let k = replicate_losses.len();
        // shifted by the first value so identical replicates reproduce it exactly
        let mean_loss = match replicate_losses.first() {
            None => 0.0,
            Some(&first) => {
                first + replicate_losses.iter().map(|l| l - first).sum::<f64>() / k as f64
            }
        };
        let std_error = if k < 2 {
            0.0
        } else {
            let var = replicate_losses
                .iter()
                .map(|l| (l - mean_loss).powi(2))
                .sum::<f64>()
                / (k - 1) as f64;
            (var / k as f64).sqrt()
        };
        CurvePoint {
            n,
            replicate_losses,
            mean_loss,
            std_error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossDataCurve {
    pub schema_version: u32,
    pub name: String,
    pub dataset_fingerprint: String,
    pub algorithm_fingerprint: String,
    pub algorithm: String,
    pub num_classes: u32,
    pub metric: LossMetric,
    /// Upper bound `B` on every replicate loss.
    pub loss_bound: f64,
    pub plan: EvalPlan,
    pub points: Vec<CurvePoint>,
    pub monotone_means: Vec<f64>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl LossDataCurve {
    /// A curve built directly from mean losses (one replicate per size).
    pub fn from_means(grid: &[usize], means: &[f64], num_classes: u32) -> Result<Self, CurveError> {
        if grid.len() != means.len() {
            return Err(CurveError::Malformed(format!(
                "{} sizes but {} means",
                grid.len(),
                means.len()
            )));
        }
        let plan = EvalPlan {
            replicates: 1,
            ..EvalPlan::with_grid(grid.to_vec())
        };
        plan.validate()?;
        let points: Vec<CurvePoint> = grid
            .iter()
            .zip(means)
            .map(|(&n, &m)| CurvePoint::from_losses(n, vec![m]))
            .collect();
        let bound = means
            .iter()
            .cloned()
            .fold(default_loss_cap(num_classes), f64::max);
        Ok(LossDataCurve {
            schema_version: CURVE_SCHEMA_VERSION,
            name: "curve".into(),
            dataset_fingerprint: "synthetic".into(),
            algorithm_fingerprint: "synthetic".into(),
            algorithm: "given means".into(),
            num_classes,
            metric: LossMetric::Nll,
            loss_bound: bound,
            monotone_means: monotone_project(means),
            plan,
            points,
            warnings: Vec::new(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.n).collect()
    }

    pub fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean_loss).collect()
    }

    pub fn point_at(&self, n: usize) -> Option<&CurvePoint> {
        self.points.iter().find(|p| p.n == n)
    }

    /// Check structural invariants, e.g. after deserializing.
    pub fn validate(&self) -> Result<(), CurveError> {
        if self.points.is_empty() {
            return Err(CurveError::Malformed("no points".into()));
        }
        if self.points.windows(2).any(|w| w[0].n >= w[1].n) {
            return Err(CurveError::Malformed(
                "sizes not strictly increasing".into(),
            ));
        }
        if self.monotone_means.len() != self.points.len() {
            return Err(CurveError::Malformed(
                "monotone_means length mismatch".into(),
            ));
        }
        if self.num_classes < 2 {
            return Err(CurveError::Malformed("num_classes < 2".into()));
        }
        for p in &self.points {
            if !p.mean_loss.is_finite() || p.mean_loss < 0.0 {
                return Err(CurveError::Malformed(format!("bad mean loss at n={}", p.n)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CurveError> {
        let curve: LossDataCurve =
            serde_json::from_str(text).map_err(|e| CurveError::Malformed(e.to_string()))?;
        curve.validate()?;
        Ok(curve)
    }
}

/// Stream for replicate `k` at size `n`.
pub fn replicate_stream(root: &RandomStream, n: usize, k: usize) -> RandomStream {
    root.derive("size", n as u64).derive("replicate", k as u64)
}

/// Estimate the expected loss at one size from `replicates` independent draws.
pub fn estimate_point(
    sampler: &dyn LossSampler,
    n: usize,
    replicates: usize,
    root: &RandomStream,
) -> Result<CurvePoint, CurveError> {
    let losses = (0..replicates)
        .into_par_iter()
        .map(|k| sample_task(sampler, n, k, root))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CurvePoint::from_losses(n, losses))
}

fn sample_task(
    sampler: &dyn LossSampler,
    n: usize,
    k: usize,
    root: &RandomStream,
) -> Result<f64, CurveError> {
    sampler
        .sample_loss(n, &replicate_stream(root, n, k))
        .map_err(|e| CurveError::Task {
            n,
            replicate: k,
            source: Box::new(e),
        })
}

/// Estimate the curve for any loss sampler. Runs on the current rayon pool;
/// the result does not depend on the number of threads.
pub fn estimate_curve_with(
    sampler: &dyn LossSampler,
    plan: &EvalPlan,
    name: &str,
    description: &str,
) -> Result<LossDataCurve, CurveError> {
    plan.validate()?;
    let root = RandomStream::new(plan.master_seed).derive("curve", 0);
    let tasks: Vec<(usize, usize)> = plan
        .grid
        .iter()
        .flat_map(|&n| (0..plan.replicates).map(move |k| (n, k)))
        .collect();
    let losses = tasks
        .par_iter()
        .map(|&(n, k)| sample_task(sampler, n, k, &root))
        .collect::<Result<Vec<_>, _>>()?;
    let points: Vec<CurvePoint> = plan
        .grid
        .iter()
        .zip(losses.chunks(plan.replicates))
        .map(|(&n, chunk)| CurvePoint::from_losses(n, chunk.to_vec()))
        .collect();

    let mut warnings = Vec::new();
    if let Some(pool) = sampler.pool_size() {
        let over: Vec<usize> = plan.grid.iter().copied().filter(|&n| n > pool).collect();
        if !over.is_empty() {
            warnings.push(format!(
                "sizes {over:?} exceed the pool of {pool} examples; subsamples repeat examples"
            ));
        }
    }
    let means: Vec<f64> = points.iter().map(|p| p.mean_loss).collect();
    Ok(LossDataCurve {
        schema_version: CURVE_SCHEMA_VERSION,
        name: name.to_string(),
        dataset_fingerprint: sampler.dataset_fingerprint(),
        algorithm_fingerprint: sampler.algorithm_fingerprint(),
        algorithm: description.to_string(),
        num_classes: sampler.num_classes(),
        metric: sampler.metric(),
        loss_bound: sampler.loss_bound(),
        plan: plan.clone(),
        monotone_means: monotone_project(&means),
        points,
        warnings,
    })
}

/// Build the sampler for `alg` on a pool/holdout pair, applying the plan's
/// normalization to trainable probes.
pub fn probe_sampler(
    alg: &LearningAlgorithm,
    pool: &Dataset,
    holdout: &Dataset,
    plan: &EvalPlan,
) -> ProbeSampler {
    let (pool, holdout) = match alg {
        LearningAlgorithm::Probe(_) if plan.normalize => {
            let stats = NormalizationStats::fit(pool);
            (stats.apply(pool), stats.apply(holdout))
        }
        _ => (pool.clone(), holdout.clone()),
    };
    ProbeSampler {
        algorithm: alg.clone(),
        loss_cap: plan.resolved_cap(pool.num_classes()),
        metric: plan.metric,
        pool,
        holdout,
    }
}

/// Estimate the curve of `alg` with an explicit holdout set.
pub fn estimate_curve_with_holdout(
    alg: &LearningAlgorithm,
    pool: &Dataset,
    holdout: &Dataset,
    plan: &EvalPlan,
) -> Result<LossDataCurve, CurveError> {
    if holdout.is_empty() {
        return Err(CurveError::EmptyHoldout);
    }
    let sampler = probe_sampler(alg, pool, holdout, plan);
    let mut curve = estimate_curve_with(&sampler, plan, pool.name(), &alg.description())?;
    if holdout.len() < SMALL_HOLDOUT {
        curve.warnings.push(format!(
            "holdout has only {} examples; loss estimates are noisy",
            holdout.len()
        ));
    }
    Ok(curve)
}

/// Split a fixed holdout off `dataset` and estimate the loss-data curve of `alg`.
pub fn estimate_curve(
    alg: &LearningAlgorithm,
    dataset: &Dataset,
    plan: &EvalPlan,
) -> Result<LossDataCurve, CurveError> {
    plan.validate()?;
    let split_stream = RandomStream::new(plan.master_seed).derive("holdout", 0);
    let (pool, holdout) = dataset
        .split_holdout(plan.holdout_fraction, &split_stream)
        .map_err(|_| CurveError::EmptyHoldout)?;
    estimate_curve_with_holdout(alg, &pool, &holdout, plan)
}

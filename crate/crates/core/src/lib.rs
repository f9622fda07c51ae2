//! Evaluate data representations by the complexity of learning low-loss
//! predictors on top of them.
//!
//! The crate estimates loss-data curves (expected validation loss of a probe
//! as a function of the evaluation-set size) and derives measures from them:
//! validation loss (VA), prequential description length (MDL), surplus
//! description length (SDL) and ε sample complexity (εSC). SDL and εSC can
//! also be estimated directly with high-probability certificates.
//!
//! Module map:
//! - [`data`]: datasets, file formats, normalization, synthetic tasks, GF(2) solver.
//! - [`probe`]: learning algorithms (MLP/linear probes trained with Adam, exact solvers).
//! - [`curve`]: loss-data curve estimation and monotone projection.
//! - [`measures`]: VA, MDL, SDL, εSC and the certified estimators.
//! - [`report`]: Markdown tables, CSV and SVG rendering.

pub mod curve;
pub mod data;
pub mod measures;
pub mod probe;
pub mod report;
pub mod rng;

pub use curve::{estimate_curve, EvalPlan, LossDataCurve, LossMetric};
pub use data::{Dataset, DatasetFormat};
pub use measures::{MeasureKind, MeasureResult, Tightness};
pub use probe::{LearningAlgorithm, ProbeSpec};
pub use rng::RandomStream;

/// Version string recorded in run manifests.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

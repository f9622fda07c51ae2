//! Representation-quality measures computed from loss-data curves, plus
//! estimators that sample the learning algorithm directly and attach
//! high-probability guarantees.

mod bounds;
mod direct;
mod from_curve;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveError, LossDataCurve};

pub use bounds::{esc_replicates, hoeffding_min_k, sdl_error_bound};
pub use direct::{esc_search, sdl_direct, EscSearchConfig, SdlEstimatorConfig};
pub use from_curve::{esc_from_curve, mdl_at, sdl_from_curve, va_at};

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("n={n} is not on the curve grid; available sizes: {available:?}")]
    NotOnGrid { n: usize, available: Vec<usize> },
    #[error("n={n} exceeds the largest measured size {max}")]
    BeyondGrid { n: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("estimate needs {required} training runs ({detail}) but the budget is {budget}")]
    BudgetExceeded {
        required: usize,
        budget: usize,
        detail: String,
    },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MeasureKind {
    #[serde(rename = "VA")]
    Va,
    #[serde(rename = "MDL")]
    Mdl,
    #[serde(rename = "SDL")]
    Sdl,
    #[serde(rename = "ESC")]
    Esc,
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::Va => "VA",
            MeasureKind::Mdl => "MDL",
            MeasureKind::Sdl => "SDL",
            MeasureKind::Esc => "εSC",
        })
    }
}

/// Whether an SDL/εSC value is a complete estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tightness {
    Tight,
    LowerBound,
    NotApplicable,
}

/// Where a measure came from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    pub dataset_fingerprint: String,
    pub algorithm_fingerprint: String,
    pub loss_bound: f64,
    pub method: String,
}

impl Provenance {
    pub fn of_curve(curve: &LossDataCurve, method: &str) -> Self {
        Provenance {
            source: curve.name.clone(),
            dataset_fingerprint: curve.dataset_fingerprint.clone(),
            algorithm_fingerprint: curve.algorithm_fingerprint.clone(),
            loss_bound: curve.loss_bound,
            method: method.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub kind: MeasureKind,
    /// Nats for VA/MDL/SDL, a sample count for εSC.
    pub value: f64,
    pub epsilon: Option<f64>,
    pub at_n: Option<usize>,
    pub is_lower_bound: bool,
    pub tightness: Tightness,
    pub error_bound: Option<f64>,
    pub annotation: Option<String>,
    pub provenance: Provenance,
}

impl MeasureResult {
    pub(crate) fn at_size(kind: MeasureKind, value: f64, n: usize, provenance: Provenance) -> Self {
        MeasureResult {
            kind,
            value,
            epsilon: None,
            at_n: Some(n),
            is_lower_bound: false,
            tightness: Tightness::NotApplicable,
            error_bound: None,
            annotation: None,
            provenance,
        }
    }

    pub(crate) fn at_tolerance(
        kind: MeasureKind,
        value: f64,
        epsilon: f64,
        tightness: Tightness,
        provenance: Provenance,
    ) -> Self {
        MeasureResult {
            kind,
            value,
            epsilon: Some(epsilon),
            at_n: None,
            is_lower_bound: tightness == Tightness::LowerBound,
            tightness,
            error_bound: None,
            annotation: None,
            provenance,
        }
    }

    /// Human-readable value: two decimals for nats, integers for sample
    /// counts, prefixed with `"> "` for lower bounds.
    pub fn display_value(&self) -> String {
        let body = match self.kind {
            MeasureKind::Esc => format!("{}", self.value.round() as u64),
            _ => format!("{:.2}", self.value),
        };
        if self.is_lower_bound {
            format!("> {body}")
        } else {
            body
        }
    }
}

impl fmt::Display for MeasureResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(n) = self.at_n {
            write!(f, " @ n={n}")?;
        }
        if let Some(e) = self.epsilon {
            write!(f, " @ ε={e}")?;
        }
        write!(f, ": {}", self.display_value())
    }
}

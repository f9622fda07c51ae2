//! Estimators that query the learning algorithm directly and certify their
//! output with Hoeffding bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{esc_replicates, sdl_error_bound};
use super::from_curve::check_epsilon;
use super::{MeasureError, MeasureKind, MeasureResult, Provenance, Tightness};
use crate::curve::{make_grid, replicate_stream, CurveError, CurvePoint, LossSampler};
use crate::rng::RandomStream;

/// Above this `M`, surplus losses are estimated on a log-uniform subgrid.
pub const DENSE_LIMIT: usize = 200;
/// Number of subgrid sizes used when `M > DENSE_LIMIT`.
pub const SUBGRID_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdlEstimatorConfig {
    pub epsilon: f64,
    pub max_size: usize,
    pub replicates: usize,
    pub delta: f64,
    /// Maximum number of training runs, if limited.
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub master_seed: u64,
}

impl SdlEstimatorConfig {
    pub fn new(epsilon: f64, max_size: usize, replicates: usize, delta: f64) -> Self {
        SdlEstimatorConfig {
            epsilon,
            max_size,
            replicates,
            delta,
            budget: None,
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), MeasureError> {
        check_epsilon(self.epsilon)?;
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(MeasureError::InvalidParameter(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.max_size < 1 || self.replicates < 1 {
            return Err(MeasureError::InvalidParameter(
                "max_size and replicates must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Sizes evaluated and the number of examples each one stands for.
    pub fn schedule(&self) -> Vec<(usize, usize)> {
        let m = self.max_size;
        let sizes = if m <= DENSE_LIMIT {
            (1..=m).collect()
        } else {
            make_grid(1, m, SUBGRID_POINTS).expect("valid subgrid")
        };
        sizes
            .iter()
            .enumerate()
            .map(|(j, &n)| (n, sizes.get(j + 1).map_or(1, |next| next - n)))
            .collect()
    }

    pub fn training_runs(&self) -> usize {
        self.schedule().len() * self.replicates
    }
}

/// Estimate the surplus description length at tolerance `ε` by averaging
/// `K` independent losses at each size up to `M`. The result is tight when
/// the loss at `M` is at most `ε/2`; otherwise it is a lower bound.
pub fn sdl_direct(
    sampler: &dyn LossSampler,
    config: &SdlEstimatorConfig,
) -> Result<MeasureResult, MeasureError> {
    config.validate()?;
    let schedule = config.schedule();
    let runs = schedule.len() * config.replicates;
    if let Some(budget) = config.budget {
        if runs > budget {
            return Err(MeasureError::BudgetExceeded {
                required: runs,
                budget,
                detail: format!(
                    "{} sizes x K={} replicates",
                    schedule.len(),
                    config.replicates
                ),
            });
        }
    }
    let root = RandomStream::new(config.master_seed).derive("sdl-direct", 0);
    let sizes: Vec<usize> = schedule.iter().map(|&(n, _)| n).collect();
    let means = mean_losses(sampler, &sizes, config.replicates, &root)?;

    let eps = config.epsilon;
    let estimate: f64 = schedule
        .iter()
        .zip(&means)
        .map(|(&(_, w), &l)| w as f64 * (l - eps).max(0.0))
        .sum();
    let last = *means.last().expect("schedule is non-empty");
    let tightness = if last <= eps / 2.0 {
        Tightness::Tight
    } else {
        Tightness::LowerBound
    };
    let method = if config.max_size <= DENSE_LIMIT {
        format!(
            "every size 1..{}, K={} bootstrap replicates",
            config.max_size, config.replicates
        )
    } else {
        format!(
            "log-uniform subgrid of {} sizes in 1..{} with chunk weights, K={} bootstrap replicates",
            schedule.len(),
            config.max_size,
            config.replicates
        )
    };
    let bound = sampler.loss_bound();
    let mut r = MeasureResult::at_tolerance(
        MeasureKind::Sdl,
        estimate,
        eps,
        tightness,
        Provenance {
            source: "direct".into(),
            dataset_fingerprint: sampler.dataset_fingerprint(),
            algorithm_fingerprint: sampler.algorithm_fingerprint(),
            loss_bound: bound,
            method,
        },
    );
    r.error_bound = Some(sdl_error_bound(
        config.max_size,
        config.replicates,
        config.delta,
        bound,
    ));
    r.annotation = Some(format!("loss at M={}: {last:.4}", config.max_size));
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscSearchConfig {
    pub epsilon: f64,
    pub delta: f64,
    /// Largest size considered (`N`).
    pub search_limit: usize,
    pub rounds: usize,
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub master_seed: u64,
}

impl EscSearchConfig {
    pub fn new(epsilon: f64, delta: f64, search_limit: usize, rounds: usize) -> Self {
        EscSearchConfig {
            epsilon,
            delta,
            search_limit,
            rounds,
            budget: None,
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), MeasureError> {
        check_epsilon(self.epsilon)?;
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(MeasureError::InvalidParameter(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.search_limit < 10 {
            return Err(MeasureError::InvalidParameter(format!(
                "search limit must be at least 10, got {}",
                self.search_limit
            )));
        }
        if self.rounds < 1 {
            return Err(MeasureError::InvalidParameter(
                "rounds must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Replicates per evaluated size for losses bounded by `bound`.
    pub fn replicates(&self, bound: f64) -> usize {
        esc_replicates(self.epsilon, self.delta, self.rounds, bound)
    }

    /// Worst-case number of training runs: 10 sizes per round.
    pub fn max_training_runs(&self, bound: f64) -> usize {
        self.replicates(bound) * 10 * self.rounds
    }
}

/// Bin edges of one round over `[lo, hi]`, excluding `lo`.
pub(crate) fn bin_edges(lo: usize, hi: usize) -> Vec<usize> {
    let mut edges: Vec<usize> = (1..=10).map(|j| lo + j * (hi - lo) / 10).collect();
    edges.dedup();
    edges.retain(|&e| e > lo);
    edges
}

/// Recursive grid search for the ε sample complexity. Each round splits
/// the current interval into ten bins and keeps the bin ending at the first
/// edge whose estimated loss is at most `ε/2`. The returned size upper
/// bounds the true sample complexity with probability at least `1 − δ`.
pub fn esc_search(
    sampler: &dyn LossSampler,
    config: &EscSearchConfig,
) -> Result<MeasureResult, MeasureError> {
    config.validate()?;
    let bound = sampler.loss_bound();
    let s = config.replicates(bound);
    let max_runs = config.max_training_runs(bound);
    if let Some(budget) = config.budget {
        if max_runs > budget {
            return Err(MeasureError::BudgetExceeded {
                required: max_runs,
                budget,
                detail: format!(
                    "S={s} replicates per size x up to 10 sizes x {} rounds",
                    config.rounds
                ),
            });
        }
    }
    let root = RandomStream::new(config.master_seed).derive("esc-search", 0);
    let eps = config.epsilon;
    let (mut lo, mut hi) = (1usize, config.search_limit);
    let mut found = false;
    let mut runs = 0usize;
    let mut completed = 0usize;
    for round in 0..config.rounds {
        let round_root = root.derive("round", round as u64);
        let mut prev = lo;
        let mut hit = None;
        for n in bin_edges(lo, hi) {
            let l = mean_losses(sampler, &[n], s, &round_root)?[0];
            runs += s;
            if l <= eps / 2.0 {
                hit = Some((prev, n));
                break;
            }
            prev = n;
        }
        match hit {
            Some((a, b)) => {
                lo = a;
                hi = b;
                found = true;
                completed += 1;
            }
            None => break,
        }
        if hi - lo <= 1 {
            break;
        }
    }
    let prov = Provenance {
        source: "direct".into(),
        dataset_fingerprint: sampler.dataset_fingerprint(),
        algorithm_fingerprint: sampler.algorithm_fingerprint(),
        loss_bound: bound,
        method: format!("recursive grid search, S={s} replicates per size"),
    };
    let mut r = if found {
        MeasureResult::at_tolerance(
            MeasureKind::Esc,
            hi as f64,
            eps,
            Tightness::NotApplicable,
            prov,
        )
    } else {
        MeasureResult::at_tolerance(
            MeasureKind::Esc,
            config.search_limit as f64,
            eps,
            Tightness::LowerBound,
            prov,
        )
    };
    r.annotation = Some(format!(
        "S={s}, {completed} refining round(s), {runs} training runs"
    ));
    Ok(r)
}

fn mean_losses(
    sampler: &dyn LossSampler,
    sizes: &[usize],
    replicates: usize,
    root: &RandomStream,
) -> Result<Vec<f64>, MeasureError> {
    let tasks: Vec<(usize, usize)> = sizes
        .iter()
        .flat_map(|&n| (0..replicates).map(move |k| (n, k)))
        .collect();
    let losses = tasks
        .par_iter()
        .map(|&(n, k)| {
            sampler
                .sample_loss(n, &replicate_stream(root, n, k))
                .map_err(|e| CurveError::Task {
                    n,
                    replicate: k,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(losses
        .chunks(replicates)
        .zip(sizes)
        .map(|(c, &n)| CurvePoint::from_losses(n, c.to_vec()).mean_loss)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{StubCurve, StubSampler};

    fn step() -> StubSampler {
        StubSampler::exact(StubCurve::Step {
            before: 0.5,
            after: 0.0,
            switch_at: 5,
        })
    }

    #[test]
    fn sdl_direct_step_stub() {
        let r = sdl_direct(&step(), &SdlEstimatorConfig::new(0.1, 10, 50, 0.05)).unwrap();
        assert!((r.value - 1.6).abs() < 1e-12, "{}", r.value);
        assert_eq!(r.tightness, Tightness::Tight);
        assert!(!r.is_lower_bound);
    }

    #[test]
    fn sdl_direct_premature_m() {
        let r = sdl_direct(&step(), &SdlEstimatorConfig::new(0.1, 3, 50, 0.05)).unwrap();
        assert!((r.value - 1.2).abs() < 1e-12);
        assert_eq!(r.tightness, Tightness::LowerBound);
        assert!(r.is_lower_bound);
    }

    #[test]
    fn sdl_direct_error_bound() {
        let mut cfg = SdlEstimatorConfig::new(0.1, 100, 1000, 0.05);
        cfg.budget = Some(1);
        let err = sdl_direct(&step(), &cfg).unwrap_err();
        match err {
            MeasureError::BudgetExceeded { required, .. } => assert_eq!(required, 100_000),
            e => panic!("{e}"),
        }
        cfg.budget = None;
        let r = sdl_direct(
            &step(),
            &SdlEstimatorConfig {
                replicates: 1000,
                ..cfg
            },
        )
        .unwrap();
        assert!((r.error_bound.unwrap() - 6.4397).abs() < 1e-3);
    }

    #[test]
    fn subgrid_weights_cover_range() {
        let cfg = SdlEstimatorConfig::new(0.1, 5000, 1, 0.05);
        let s = cfg.schedule();
        assert!(s.len() <= SUBGRID_POINTS);
        assert_eq!(s[0].0, 1);
        assert_eq!(s.last().unwrap().0, 5000);
        let covered: usize = s.iter().map(|&(_, w)| w).sum();
        assert_eq!(covered, 5000);
        let dense = SdlEstimatorConfig::new(0.1, 200, 1, 0.05).schedule();
        assert_eq!(dense.len(), 200);
        assert!(dense.iter().all(|&(_, w)| w == 1));
    }

    #[test]
    fn subgrid_exact_on_constant_tail() {
        let s = StubSampler::exact(StubCurve::Constant { value: 0.3 });
        let r = sdl_direct(&s, &SdlEstimatorConfig::new(0.1, 1000, 1, 0.05)).unwrap();
        assert!((r.value - 200.0).abs() < 1e-9);
        assert!(r.provenance.method.contains("subgrid"));
    }

    #[test]
    fn bins() {
        assert_eq!(bin_edges(1, 1000)[..3], [100, 200, 300]);
        assert_eq!(
            bin_edges(1, 100),
            vec![10, 20, 30, 40, 50, 60, 70, 80, 90, 100]
        );
        assert_eq!(bin_edges(3, 6), vec![4, 5, 6]);
    }

    fn inverse() -> StubSampler {
        StubSampler::exact(StubCurve::Inverse { scale: 1.0 })
    }

    #[test]
    fn esc_search_inverse_stub() {
        let one = esc_search(&inverse(), &EscSearchConfig::new(0.2, 0.05, 1000, 1)).unwrap();
        assert_eq!(one.value, 100.0);
        let two = esc_search(&inverse(), &EscSearchConfig::new(0.2, 0.05, 1000, 2)).unwrap();
        assert!((5.0..=14.0).contains(&two.value), "{}", two.value);
        assert_eq!(two.value, 10.0);
        assert!(!two.is_lower_bound);
    }

    #[test]
    fn esc_search_immediate_and_unreachable() {
        let easy = esc_search(&inverse(), &EscSearchConfig::new(3.0, 0.05, 1000, 1)).unwrap();
        assert_eq!(easy.value, 100.0);
        let floor = StubSampler::exact(StubCurve::PowerLaw {
            floor: 0.3,
            scale: 1.0,
            exponent: 1.0,
        });
        let r = esc_search(&floor, &EscSearchConfig::new(0.2, 0.05, 1000, 2)).unwrap();
        assert!(r.is_lower_bound);
        assert_eq!(r.display_value(), "> 1000");
    }

    #[test]
    fn esc_search_budget_states_s() {
        let mut cfg = EscSearchConfig::new(0.1, 0.05, 1000, 2);
        cfg.budget = Some(100);
        let msg = esc_search(&inverse(), &cfg).unwrap_err().to_string();
        assert!(msg.contains("S=1337"), "{msg}");
    }

    #[test]
    fn esc_search_validation() {
        assert!(EscSearchConfig::new(0.1, 0.05, 9, 1).validate().is_err());
        assert!(EscSearchConfig::new(0.1, 0.05, 10, 0).validate().is_err());
    }
}

//! Learning algorithms: trainable probes and exact alternatives.
//!
//! Every algorithm maps a training [`Dataset`] and a random stream to a
//! [`Predictor`] that returns normalized log-probabilities over classes.

mod gradcheck;
mod network;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{gf2_solve, BitMatrix, BitVector, Dataset, Gf2Error};
use crate::rng::RandomStream;
use network::{Adam, Network};

pub use gradcheck::{grad_check, GradCheck};

/// Probability mass taken from the predicted class by exact (deterministic)
/// predictors, so one wrong guess costs `-ln(λ)` nats instead of infinity.
pub const LABEL_SMOOTHING: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("GF(2) parity solver needs 0/1 features")]
    NonBinaryFeatures,
    #[error(
        "label-copy algorithm needs a single 0/1 feature and 2 classes (got d={dim}, K={classes})"
    )]
    NotCopyable { dim: usize, classes: u32 },
    #[error("predictor expects {expected} input features, dataset has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("predictor covers {expected} classes, dataset has {got}")]
    ClassMismatch { expected: u32, got: u32 },
    #[error("parity training data has no consistent secret: {0}")]
    Inconsistent(#[from] Gf2Error),
    #[error("invalid probe spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    Linear,
    /// Two ReLU hidden layers of `hidden_width` units.
    Mlp2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
}

/// Configuration of a trainable probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbeSpec {
    pub architecture: Architecture,
    pub hidden_width: usize,
    pub activation: Activation,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    pub steps: usize,
    pub batch_size: usize,
    pub init_scale: f64,
    pub seed_tag: String,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec {
            architecture: Architecture::Mlp2,
            hidden_width: 512,
            activation: Activation::Relu,
            learning_rate: 1e-4,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            steps: 4000,
            batch_size: 32,
            init_scale: 1.0,
            seed_tag: "probe".to_string(),
        }
    }
}

impl ProbeSpec {
    pub fn linear() -> Self {
        ProbeSpec {
            architecture: Architecture::Linear,
            ..Default::default()
        }
    }

    pub fn mlp2(hidden_width: usize) -> Self {
        ProbeSpec {
            hidden_width,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ProbeError> {
        let bad = |m: &str| Err(ProbeError::InvalidSpec(m.to_string()));
        if self.hidden_width == 0 {
            return bad("hidden_width must be >= 1");
        }
        if self.steps == 0 {
            return bad("steps must be >= 1");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be >= 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be > 0");
        }
        if !(self.init_scale > 0.0 && self.init_scale.is_finite()) {
            return bad("init_scale must be > 0");
        }
        Ok(())
    }

    pub(crate) fn layer_widths(&self, input: usize, classes: usize) -> Vec<usize> {
        match self.architecture {
            Architecture::Linear => vec![input, classes],
            Architecture::Mlp2 => vec![input, self.hidden_width, self.hidden_width, classes],
        }
    }

    pub(crate) fn init_network<T: network::Scalar>(
        &self,
        input: usize,
        classes: usize,
        stream: &RandomStream,
    ) -> Network<T> {
        let mut rng = stream.derive(&self.seed_tag, 0).derive("init", 0).rng();
        Network::init(
            &self.layer_widths(input, classes),
            self.init_scale,
            &mut rng,
        )
    }
}

/// The probing algorithm run on top of a representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LearningAlgorithm {
    Probe(ProbeSpec),
    /// Exact parity learner: Gaussian elimination over GF(2).
    Gf2Parity,
    /// Laplace-smoothed label marginal, ignoring features.
    ConstantMarginal,
    /// Predict the label equal to the single binary feature, with confidence
    /// fitted as the Laplace-smoothed agreement rate.
    LabelCopy,
}

impl LearningAlgorithm {
    pub fn description(&self) -> String {
        match self {
            LearningAlgorithm::Probe(spec) => match spec.architecture {
                Architecture::Linear => format!(
                    "linear softmax probe, Adam lr={} steps={} batch={}",
                    spec.learning_rate, spec.steps, spec.batch_size
                ),
                Architecture::Mlp2 => format!(
                    "2-hidden-layer ReLU MLP (width {}), Adam lr={} steps={} batch={}",
                    spec.hidden_width, spec.learning_rate, spec.steps, spec.batch_size
                ),
            },
            LearningAlgorithm::Gf2Parity => "GF(2) Gaussian elimination parity learner".into(),
            LearningAlgorithm::ConstantMarginal => "add-one smoothed label marginal".into(),
            LearningAlgorithm::LabelCopy => "copy the binary feature as the label".into(),
        }
    }
}

/// A trained predictor. Immutable after training.
#[derive(Debug, Clone)]
pub struct Predictor(Model);

#[derive(Debug, Clone)]
enum Model {
    Probe { net: Network<f32> },
    Parity { secret: BitVector, num_classes: u32 },
    Constant { log_probs: Vec<f64> },
    LabelCopy { log_agree: f64, log_disagree: f64 },
}

/// Log-softmax of one row of logits, in f64.
fn log_softmax(logits: impl Iterator<Item = f64>) -> Vec<f64> {
    let z: Vec<f64> = logits.collect();
    let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
    z.into_iter().map(|v| v - lse).collect()
}

fn bits_of(x: &[f32]) -> BitVector {
    BitVector::from_bits(&x.iter().map(|&v| v > 0.5).collect::<Vec<_>>())
}

impl Predictor {
    pub fn num_classes(&self) -> u32 {
        match &self.0 {
            Model::Probe { net } => net.output_dim() as u32,
            Model::Parity { num_classes, .. } => *num_classes,
            Model::Constant { log_probs } => log_probs.len() as u32,
            Model::LabelCopy { .. } => 2,
        }
    }

    /// Required feature dimension, if the predictor reads features at all.
    pub fn input_dim(&self) -> Option<usize> {
        match &self.0 {
            Model::Probe { net } => Some(net.input_dim()),
            Model::Parity { secret, .. } => Some(secret.len()),
            Model::Constant { .. } => None,
            Model::LabelCopy { .. } => Some(1),
        }
    }

    /// Normalized log-probabilities over the classes for one input.
    pub fn predict_log_probs(&self, x: &[f32]) -> Vec<f64> {
        match &self.0 {
            Model::Probe { net } => {
                let view = ArrayView2::from_shape((1, x.len()), x).expect("row shape");
                let logits = net.logits(view);
                log_softmax(logits.row(0).iter().map(|&v| v as f64))
            }
            Model::Parity {
                secret,
                num_classes,
            } => {
                let class = secret.dot(&bits_of(x)) as usize;
                let k = *num_classes as usize;
                let other = (LABEL_SMOOTHING / (k - 1) as f64).ln();
                let mut out = vec![other; k];
                out[class] = (1.0 - LABEL_SMOOTHING).ln();
                out
            }
            Model::Constant { log_probs } => log_probs.clone(),
            Model::LabelCopy {
                log_agree,
                log_disagree,
            } => {
                if x[0] > 0.5 {
                    vec![*log_disagree, *log_agree]
                } else {
                    vec![*log_agree, *log_disagree]
                }
            }
        }
    }

    /// Log-probabilities for every row, `n × K` row-major.
    pub fn predict_all(&self, ds: &Dataset) -> Vec<Vec<f64>> {
        match &self.0 {
            Model::Probe { net } => {
                let x = ArrayView2::from_shape((ds.len(), ds.dim()), ds.features()).expect("shape");
                let logits: Array2<f32> = net.logits(x);
                logits
                    .outer_iter()
                    .map(|row| log_softmax(row.iter().map(|&v| v as f64)))
                    .collect()
            }
            _ => ds.rows().map(|(x, _)| self.predict_log_probs(x)).collect(),
        }
    }

    fn check_compatible(&self, ds: &Dataset) -> Result<(), ProbeError> {
        if self.num_classes() != ds.num_classes() {
            return Err(ProbeError::ClassMismatch {
                expected: self.num_classes(),
                got: ds.num_classes(),
            });
        }
        match self.input_dim() {
            Some(d) if d != ds.dim() => Err(ProbeError::DimensionMismatch {
                expected: d,
                got: ds.dim(),
            }),
            _ => Ok(()),
        }
    }
}

/// Run `alg` on `train_set`. Deterministic given `(alg, train_set, stream)`.
pub fn train(
    alg: &LearningAlgorithm,
    train_set: &Dataset,
    stream: &RandomStream,
) -> Result<Predictor, ProbeError> {
    match alg {
        LearningAlgorithm::Probe(spec) => train_probe(spec, train_set, stream),
        LearningAlgorithm::Gf2Parity => {
            if !train_set.is_binary() {
                return Err(ProbeError::NonBinaryFeatures);
            }
            let mut x = BitMatrix::new(train_set.dim());
            for (row, _) in train_set.rows() {
                x.push_row(bits_of(row));
            }
            let y = BitVector::from_bits(
                &train_set
                    .labels()
                    .iter()
                    .map(|&l| l == 1)
                    .collect::<Vec<_>>(),
            );
            let solution = gf2_solve(&x, &y)?;
            Ok(Predictor(Model::Parity {
                secret: solution.solution().clone(),
                num_classes: train_set.num_classes(),
            }))
        }
        LearningAlgorithm::ConstantMarginal => {
            let k = train_set.num_classes() as usize;
            let mut counts = vec![1.0f64; k];
            for &l in train_set.labels() {
                counts[l as usize] += 1.0;
            }
            let total = (train_set.len() + k) as f64;
            Ok(Predictor(Model::Constant {
                log_probs: counts.into_iter().map(|c| (c / total).ln()).collect(),
            }))
        }
        LearningAlgorithm::LabelCopy => {
            if train_set.dim() != 1 || train_set.num_classes() != 2 || !train_set.is_binary() {
                return Err(ProbeError::NotCopyable {
                    dim: train_set.dim(),
                    classes: train_set.num_classes(),
                });
            }
            let agree = train_set
                .rows()
                .filter(|(x, y)| (x[0] > 0.5) == (*y == 1))
                .count();
            let p = (agree as f64 + 1.0) / (train_set.len() as f64 + 2.0);
            Ok(Predictor(Model::LabelCopy {
                log_agree: p.ln(),
                log_disagree: (1.0 - p).ln(),
            }))
        }
    }
}

fn train_probe(
    spec: &ProbeSpec,
    train_set: &Dataset,
    stream: &RandomStream,
) -> Result<Predictor, ProbeError> {
    use rand::seq::SliceRandom;

    spec.validate()?;
    let n = train_set.len();
    let d = train_set.dim();
    let mut net: Network<f32> = spec.init_network(d, train_set.num_classes() as usize, stream);
    let mut adam = Adam::new(
        &net,
        spec.learning_rate,
        spec.adam_beta1,
        spec.adam_beta2,
        spec.adam_epsilon,
    );
    let mut rng = stream
        .derive(&spec.seed_tag, 0)
        .derive("minibatch", 0)
        .rng();
    let batch = spec.batch_size.min(n);
    let mut order: Vec<usize> = (0..n).collect();
    let mut cursor = n; // forces a shuffle before the first step
    let mut xb = Array2::<f32>::zeros((batch, d));
    let mut yb = vec![0u32; batch];
    for _ in 0..spec.steps {
        for (i, label) in yb.iter_mut().enumerate() {
            if cursor == n {
                order.shuffle(&mut rng);
                cursor = 0;
            }
            let idx = order[cursor];
            cursor += 1;
            xb.row_mut(i)
                .iter_mut()
                .zip(train_set.row(idx))
                .for_each(|(dst, &v)| *dst = v);
            *label = train_set.labels()[idx];
        }
        let (_, grads) = net.loss_and_grad(xb.view(), &yb);
        adam.update(&mut net, &grads);
    }
    Ok(Predictor(Model::Probe { net }))
}

/// Mean over examples of `min(cap, -ln p(y|x))`, in nats.
pub fn evaluate_loss(pred: &Predictor, eval_set: &Dataset, cap: f64) -> Result<f64, ProbeError> {
    pred.check_compatible(eval_set)?;
    let logp = pred.predict_all(eval_set);
    let total: f64 = logp
        .iter()
        .zip(eval_set.labels())
        .map(|(lp, &y)| (-lp[y as usize]).min(cap))
        .sum();
    Ok(total / eval_set.len() as f64)
}

fn argmax(lp: &[f64]) -> usize {
    // first maximum wins, so ties go to the smaller class index
    lp.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        })
        .0
}

/// Fraction of examples whose argmax prediction equals the label.
pub fn evaluate_accuracy(pred: &Predictor, eval_set: &Dataset) -> Result<f64, ProbeError> {
    pred.check_compatible(eval_set)?;
    let logp = pred.predict_all(eval_set);
    let hits = logp
        .iter()
        .zip(eval_set.labels())
        .filter(|(lp, &y)| argmax(lp) == y as usize)
        .count();
    Ok(hits as f64 / eval_set.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{gen_gaussian_task, gen_parity, ParityRepr, ParitySpec};

    fn labels_only(labels: Vec<u32>, k: u32) -> Dataset {
        let n = labels.len();
        Dataset::new("l", vec![0.0; n], labels, 1, k).unwrap()
    }

    fn uniform(k: usize) -> Predictor {
        Predictor(Model::Constant {
            log_probs: vec![-(k as f64).ln(); k],
        })
    }

    #[test]
    fn constant_marginal_laplace_counts() {
        let ds = labels_only(vec![0, 0, 1], 2);
        let pred = train(
            &LearningAlgorithm::ConstantMarginal,
            &ds,
            &RandomStream::new(0),
        )
        .unwrap();
        let lp = pred.predict_log_probs(&[123.0]);
        assert!((lp[0].exp() - 0.6).abs() < 1e-12);
        assert!((lp[1].exp() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn perfect_predictor_zero_loss() {
        // a label-copy predictor fitted on agreeing data, evaluated with a
        // hand-built one-hot version
        let ds = Dataset::new("p", vec![0.0, 1.0, 1.0], vec![0, 1, 1], 1, 2).unwrap();
        let pred = Predictor(Model::LabelCopy {
            log_agree: 0.0,
            log_disagree: f64::NEG_INFINITY,
        });
        assert_eq!(evaluate_loss(&pred, &ds, 10.0).unwrap(), 0.0);
        assert_eq!(evaluate_accuracy(&pred, &ds).unwrap(), 1.0);
    }

    #[test]
    fn uniform_loss_is_ln_k() {
        let ds = labels_only((0..10).collect(), 10);
        let loss = evaluate_loss(&uniform(10), &ds, 2.31).unwrap();
        assert!((loss - 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn truncation_caps_each_example() {
        let ds = labels_only(vec![1], 2);
        let pred = Predictor(Model::Constant {
            log_probs: vec![(1.0 - (-9.0f64).exp()).ln(), -9.0],
        });
        assert_eq!(evaluate_loss(&pred, &ds, 5.0).unwrap(), 5.0);
        assert!((evaluate_loss(&pred, &ds, 100.0).unwrap() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn loss_monotone_in_cap() {
        let ds = labels_only(vec![0, 1, 1, 0, 1], 2);
        let pred = Predictor(Model::Constant {
            log_probs: vec![(0.99f64).ln(), (0.01f64).ln()],
        });
        let mut prev = 0.0;
        for cap in [0.1, 0.5, 1.0, 3.0, 4.0, 10.0, 100.0] {
            let l = evaluate_loss(&pred, &ds, cap).unwrap();
            assert!(l >= prev);
            prev = l;
        }
        let untruncated = (2.0 * -(0.99f64).ln() + 3.0 * -(0.01f64).ln()) / 5.0;
        assert!((prev - untruncated).abs() < 1e-12);
    }

    #[test]
    fn uniform_accuracy_is_class_zero_frequency() {
        let ds = labels_only(vec![0, 1, 1, 1], 2);
        assert_eq!(evaluate_accuracy(&uniform(2), &ds).unwrap(), 0.25);
    }

    #[test]
    fn class_and_dim_mismatch() {
        let ds = labels_only(vec![0, 1, 2], 3);
        assert!(matches!(
            evaluate_loss(&uniform(2), &ds, 5.0),
            Err(ProbeError::ClassMismatch { .. })
        ));
        let wide = Dataset::new("w", vec![0.0; 4], vec![0, 1], 2, 2).unwrap();
        let copy = Predictor(Model::LabelCopy {
            log_agree: -0.1,
            log_disagree: -2.0,
        });
        assert!(matches!(
            evaluate_accuracy(&copy, &wide),
            Err(ProbeError::DimensionMismatch {
                expected: 1,
                got: 2
            })
        ));
    }

    #[test]
    fn gf2_exact_recovery_on_full_rank_data() {
        let spec = ParitySpec::new(16, 0.0, ParityRepr::Raw, 4);
        let train_set = gen_parity(&spec, 200, &RandomStream::new(1)).unwrap();
        let pred = train(
            &LearningAlgorithm::Gf2Parity,
            &train_set,
            &RandomStream::new(0),
        )
        .unwrap();
        match &pred.0 {
            Model::Parity { secret, .. } => assert_eq!(secret.to_bits(), spec.resolved_secret()),
            _ => unreachable!(),
        }
        let fresh = gen_parity(&spec, 2000, &RandomStream::new(2)).unwrap();
        assert_eq!(evaluate_accuracy(&pred, &fresh).unwrap(), 1.0);
        let loss = evaluate_loss(&pred, &fresh, 10.0).unwrap();
        assert!((loss - -(1.0 - LABEL_SMOOTHING).ln()).abs() < 1e-12);
    }

    #[test]
    fn gf2_never_errs_inside_row_span() {
        let spec = ParitySpec::new(16, 0.0, ParityRepr::Raw, 8);
        let train_set = gen_parity(&spec, 9, &RandomStream::new(3)).unwrap();
        let pred = train(
            &LearningAlgorithm::Gf2Parity,
            &train_set,
            &RandomStream::new(0),
        )
        .unwrap();
        let secret = spec.resolved_secret();
        // every XOR combination of training rows lies in the row span
        for mask in 1u32..(1 << train_set.len()) {
            let mut x = vec![0.0f32; 16];
            for i in 0..train_set.len() {
                if mask >> i & 1 == 1 {
                    for (xj, &v) in x.iter_mut().zip(train_set.row(i)) {
                        *xj = if (*xj == 1.0) ^ (v == 1.0) { 1.0 } else { 0.0 };
                    }
                }
            }
            let truth = x
                .iter()
                .zip(&secret)
                .filter(|(v, &s)| **v == 1.0 && s)
                .count()
                % 2;
            assert_eq!(argmax(&pred.predict_log_probs(&x)), truth);
        }
    }

    #[test]
    fn gf2_rejects_real_features() {
        let ds = Dataset::new("r", vec![0.5, 1.0], vec![0, 1], 1, 2).unwrap();
        assert!(matches!(
            train(&LearningAlgorithm::Gf2Parity, &ds, &RandomStream::new(0)),
            Err(ProbeError::NonBinaryFeatures)
        ));
    }

    #[test]
    fn label_copy_accuracy_is_one_minus_alpha() {
        let spec = ParitySpec::new(16, 0.1, ParityRepr::NoisyLabel, 1);
        let train_set = gen_parity(&spec, 100, &RandomStream::new(1)).unwrap();
        let pred = train(
            &LearningAlgorithm::LabelCopy,
            &train_set,
            &RandomStream::new(0),
        )
        .unwrap();
        let n = 200_000;
        let fresh = gen_parity(&spec, n, &RandomStream::new(9)).unwrap();
        let acc = evaluate_accuracy(&pred, &fresh).unwrap();
        let sigma = (0.09 / n as f64).sqrt();
        assert!((acc - 0.9).abs() <= 3.0 * sigma, "accuracy {acc}");
    }

    #[test]
    fn linear_probe_separates_distant_gaussians() {
        let train_set = gen_gaussian_task(2, 10.0, 200, &RandomStream::new(1)).unwrap();
        let test_set = gen_gaussian_task(2, 10.0, 2000, &RandomStream::new(2)).unwrap();
        let pred = train(
            &LearningAlgorithm::Probe(ProbeSpec::linear()),
            &train_set,
            &RandomStream::new(3),
        )
        .unwrap();
        assert!(evaluate_accuracy(&pred, &test_set).unwrap() >= 0.99);
    }

    #[test]
    fn probe_training_deterministic_and_normalized() {
        let ds = gen_gaussian_task(3, 1.0, 64, &RandomStream::new(5)).unwrap();
        let alg = LearningAlgorithm::Probe(ProbeSpec {
            steps: 50,
            ..ProbeSpec::mlp2(16)
        });
        let stream = RandomStream::new(11);
        let a = train(&alg, &ds, &stream).unwrap();
        let b = train(&alg, &ds, &stream).unwrap();
        for (x, _) in ds.rows() {
            let (la, lb) = (a.predict_log_probs(x), b.predict_log_probs(x));
            assert_eq!(
                la.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                lb.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
            );
            let total: f64 = la.iter().map(|v| v.exp()).sum();
            assert!((total - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn default_training_lowers_training_loss() {
        let ds = gen_gaussian_task(2, 1.0, 256, &RandomStream::new(6)).unwrap();
        let spec = ProbeSpec {
            hidden_width: 32,
            steps: 400,
            ..ProbeSpec::default()
        };
        let stream = RandomStream::new(12);
        let untrained = Predictor(Model::Probe {
            net: spec.init_network(2, 2, &stream),
        });
        let initial = evaluate_loss(&untrained, &ds, 1e9).unwrap();
        let pred = train(&LearningAlgorithm::Probe(spec), &ds, &stream).unwrap();
        let trained = evaluate_loss(&pred, &ds, 1e9).unwrap();
        assert!(trained <= initial, "{trained} > {initial}");
    }

    #[test]
    fn spec_validation() {
        assert!(ProbeSpec {
            steps: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(ProbeSpec {
            hidden_width: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(ProbeSpec {
            learning_rate: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(ProbeSpec::default().validate().is_ok());
    }

    #[test]
    fn algorithm_serde_shape() {
        let json = serde_json::to_string(&LearningAlgorithm::Gf2Parity).unwrap();
        assert_eq!(json, r#"{"kind":"gf2_parity"}"#);
        let alg: LearningAlgorithm =
            serde_json::from_str(r#"{"kind":"probe","architecture":"linear","steps":10}"#).unwrap();
        match alg {
            LearningAlgorithm::Probe(s) => {
                assert_eq!(s.architecture, Architecture::Linear);
                assert_eq!(s.steps, 10);
                assert_eq!(s.hidden_width, 512);
            }
            _ => panic!(),
        }
    }
}

//! Finite-difference check of the hand-written backpropagation.

use ndarray::{Array2, ArrayView2};

use super::network::Network;
use super::ProbeSpec;
use crate::data::Dataset;
use crate::rng::RandomStream;

const FD_STEP: f64 = 1e-4;
// Below this magnitude gradients are compared absolutely; central
// differences with step 1e-4 are only accurate to about that level.
const MAGNITUDE_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct GradCheck {
    pub max_relative_error: f64,
    /// Analytic gradient per layer, weights then biases, flattened.
    pub analytic: Vec<Vec<f64>>,
    pub numeric: Vec<Vec<f64>>,
}

/// Compare backpropagated gradients of the mean cross-entropy against
/// central finite differences, all in f64.
pub fn grad_check(spec: &ProbeSpec, sample: &Dataset) -> GradCheck {
    let stream = RandomStream::new(0).derive("grad-check", 0);
    let mut net: Network<f64> =
        spec.init_network(sample.dim(), sample.num_classes() as usize, &stream);
    let x: Array2<f64> = ArrayView2::from_shape((sample.len(), sample.dim()), sample.features())
        .expect("shape")
        .mapv(|v| v as f64);
    let labels = sample.labels();

    let (_, grads) = net.loss_and_grad(x.view(), labels);
    let analytic: Vec<Vec<f64>> = grads
        .iter()
        .map(|g| g.w.iter().chain(g.b.iter()).copied().collect())
        .collect();

    let sizes: Vec<usize> = analytic.iter().map(Vec::len).collect();
    let mut flat_numeric = Vec::with_capacity(net.param_count());
    for idx in 0..net.param_count() {
        let original = *net.params_mut().nth(idx).unwrap();
        *net.params_mut().nth(idx).unwrap() = original + FD_STEP;
        let plus = net.mean_loss(x.view(), labels);
        *net.params_mut().nth(idx).unwrap() = original - FD_STEP;
        let minus = net.mean_loss(x.view(), labels);
        *net.params_mut().nth(idx).unwrap() = original;
        flat_numeric.push((plus - minus) / (2.0 * FD_STEP));
    }
    let mut numeric = Vec::with_capacity(sizes.len());
    let mut rest = flat_numeric.as_slice();
    for len in sizes {
        let (head, tail) = rest.split_at(len);
        numeric.push(head.to_vec());
        rest = tail;
    }

    let max_relative_error = analytic
        .iter()
        .flatten()
        .zip(numeric.iter().flatten())
        .map(|(&a, &n)| (a - n).abs() / a.abs().max(n.abs()).max(MAGNITUDE_FLOOR))
        .fold(0.0, f64::max);
    GradCheck {
        max_relative_error,
        analytic,
        numeric,
    }
}

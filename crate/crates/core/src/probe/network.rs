//! Dense softmax networks with hand-written backpropagation and Adam.
//!
//! Generic over the float type: training runs in `f32`, gradient checks in
//! `f64`, both through the same forward/backward code.

use std::fmt::Debug;
use std::ops::AddAssign;

use ndarray::{Array1, Array2, ArrayView2, Axis, LinalgScalar, ScalarOperand, Zip};
use num_traits::{Float, FromPrimitive};
use rand::Rng;

pub trait Scalar:
    Float + LinalgScalar + ScalarOperand + FromPrimitive + AddAssign + Debug + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + LinalgScalar
        + ScalarOperand
        + FromPrimitive
        + AddAssign
        + Debug
        + Send
        + Sync
        + 'static
{
}

fn lit<T: Scalar>(v: f64) -> T {
    T::from_f64(v).unwrap()
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Dense<T> {
    /// `fan_in × fan_out`
    pub w: Array2<T>,
    pub b: Array1<T>,
}

impl<T: Scalar> Dense<T> {
    fn zeros_like(&self) -> Self {
        Dense {
            w: Array2::zeros(self.w.raw_dim()),
            b: Array1::zeros(self.b.raw_dim()),
        }
    }
}

/// Affine layers with ReLU between them and a softmax head.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Network<T> {
    pub layers: Vec<Dense<T>>,
}

pub(crate) struct Activations<T> {
    /// Input followed by each hidden post-activation.
    inputs: Vec<Array2<T>>,
    logits: Array2<T>,
}

impl<T: Scalar> Network<T> {
    /// Weights and biases uniform in `±scale/√fan_in`.
    pub fn init<R: Rng>(widths: &[usize], scale: f64, rng: &mut R) -> Self {
        let layers = widths
            .windows(2)
            .map(|w| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let bound = scale / (fan_in as f64).sqrt();
                let weights = Array2::from_shape_fn((fan_in, fan_out), |_| {
                    lit::<T>(rng.random_range(-bound..=bound))
                });
                let bias =
                    Array1::from_shape_fn(fan_out, |_| lit::<T>(rng.random_range(-bound..=bound)));
                Dense {
                    w: weights,
                    b: bias,
                }
            })
            .collect();
        Network { layers }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].w.nrows()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().w.ncols()
    }

    pub fn forward(&self, x: ArrayView2<T>) -> Activations<T> {
        let mut inputs = vec![x.to_owned()];
        let last = self.layers.len() - 1;
        let mut logits = None;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut z = inputs[i].dot(&layer.w);
            z += &layer.b;
            if i == last {
                logits = Some(z);
            } else {
                z.mapv_inplace(|v| v.max(T::zero()));
                inputs.push(z);
            }
        }
        Activations {
            inputs,
            logits: logits.unwrap(),
        }
    }

    pub fn logits(&self, x: ArrayView2<T>) -> Array2<T> {
        self.forward(x).logits
    }

    /// Mean softmax cross-entropy (nats, accumulated in f64) and parameter
    /// gradients, one `Dense` per layer.
    pub fn loss_and_grad(&self, x: ArrayView2<T>, labels: &[u32]) -> (f64, Vec<Dense<T>>) {
        let acts = self.forward(x);
        let batch = labels.len();
        let (loss, mut delta) = softmax_xent_grad(&acts.logits, labels);
        delta.mapv_inplace(|v| v / lit::<T>(batch as f64));

        let mut grads: Vec<Dense<T>> = self.layers.iter().map(Dense::zeros_like).collect();
        for l in (0..self.layers.len()).rev() {
            grads[l].w = acts.inputs[l].t().dot(&delta);
            grads[l].b = delta.sum_axis(Axis(0));
            if l > 0 {
                let mut back = delta.dot(&self.layers[l].w.t());
                Zip::from(&mut back).and(&acts.inputs[l]).for_each(|g, &a| {
                    if a <= T::zero() {
                        *g = T::zero();
                    }
                });
                delta = back;
            }
        }
        (loss / batch as f64, grads)
    }

    pub fn mean_loss(&self, x: ArrayView2<T>, labels: &[u32]) -> f64 {
        let logits = self.logits(x);
        softmax_xent_grad(&logits, labels).0 / labels.len() as f64
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.w.len() + l.b.len()).sum()
    }

    /// Mutable access to every scalar parameter in a fixed order.
    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut T> {
        self.layers
            .iter_mut()
            .flat_map(|l| l.w.iter_mut().chain(l.b.iter_mut()))
    }
}

/// Summed cross-entropy over rows and `softmax - onehot` per row.
fn softmax_xent_grad<T: Scalar>(logits: &Array2<T>, labels: &[u32]) -> (f64, Array2<T>) {
    let mut probs = logits.clone();
    let mut total = 0.0f64;
    for ((mut row, logit_row), &y) in probs.outer_iter_mut().zip(logits.outer_iter()).zip(labels) {
        let y = y as usize;
        let max = row.fold(T::neg_infinity(), |m, &v| m.max(v));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        total -= (logit_row[y] - max - sum.ln()).to_f64().unwrap();
        row.mapv_inplace(|v| v / sum);
        row[y] = row[y] - T::one();
    }
    (total, probs)
}

/// Adam with bias correction.
#[derive(Debug, Clone)]
pub(crate) struct Adam<T> {
    lr: T,
    beta1: T,
    beta2: T,
    eps: T,
    step: i32,
    m: Vec<Dense<T>>,
    v: Vec<Dense<T>>,
}

impl<T: Scalar> Adam<T> {
    pub fn new(net: &Network<T>, lr: f64, beta1: f64, beta2: f64, eps: f64) -> Self {
        Adam {
            lr: lit(lr),
            beta1: lit(beta1),
            beta2: lit(beta2),
            eps: lit(eps),
            step: 0,
            m: net.layers.iter().map(Dense::zeros_like).collect(),
            v: net.layers.iter().map(Dense::zeros_like).collect(),
        }
    }

    pub fn update(&mut self, net: &mut Network<T>, grads: &[Dense<T>]) {
        self.step += 1;
        let one = T::one();
        let c1 = one - self.beta1.powi(self.step);
        let c2 = one - self.beta2.powi(self.step);
        let (b1, b2, lr, eps) = (self.beta1, self.beta2, self.lr, self.eps);
        let apply = |p: &mut T, m: &mut T, v: &mut T, g: T| {
            *m = b1 * *m + (one - b1) * g;
            *v = b2 * *v + (one - b2) * g * g;
            let m_hat = *m / c1;
            let v_hat = *v / c2;
            *p = *p - lr * m_hat / (v_hat.sqrt() + eps);
        };
        for (((layer, g), m), v) in net
            .layers
            .iter_mut()
            .zip(grads)
            .zip(&mut self.m)
            .zip(&mut self.v)
        {
            Zip::from(&mut layer.w)
                .and(&mut m.w)
                .and(&mut v.w)
                .and(&g.w)
                .for_each(|p, m, v, &g| apply(p, m, v, g));
            Zip::from(&mut layer.b)
                .and(&mut m.b)
                .and(&mut v.b)
                .and(&g.b)
                .for_each(|p, m, v, &g| apply(p, m, v, g));
        }
    }
}

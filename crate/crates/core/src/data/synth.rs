//! Synthetic tasks with exactly known Bayes loss.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{DataError, Dataset};
use crate::rng::RandomStream;

/// How the parity task is presented to the learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityRepr {
    /// One feature `z = y XOR e` with `e ~ Bernoulli(alpha)`, encoded as 0.0/1.0.
    NoisyLabel,
    /// The raw bit vector `x` in `{0,1}^d`.
    Raw,
}

/// Labels are `y = <x, s> mod 2` for uniform random `x` in `{0,1}^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParitySpec {
    pub d: usize,
    pub alpha: f64,
    /// Fixed secret `s`; drawn from `seed` when absent.
    pub secret: Option<Vec<bool>>,
    pub repr: ParityRepr,
    pub seed: u64,
}

impl ParitySpec {
    pub fn new(d: usize, alpha: f64, repr: ParityRepr, seed: u64) -> Self {
        ParitySpec {
            d,
            alpha,
            secret: None,
            repr,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), DataError> {
        if self.d == 0 {
            return Err(DataError::InvalidSpec(
                "parity dimension must be positive".into(),
            ));
        }
        if !(0.0..0.5).contains(&self.alpha) {
            return Err(DataError::InvalidSpec(format!(
                "noise alpha must lie in [0, 0.5), got {}",
                self.alpha
            )));
        }
        if let Some(s) = &self.secret {
            if s.len() != self.d {
                return Err(DataError::InvalidSpec(format!(
                    "secret has {} bits, expected {}",
                    s.len(),
                    self.d
                )));
            }
        }
        Ok(())
    }

    /// The secret in use: the supplied one, or one drawn from `seed`.
    pub fn resolved_secret(&self) -> Vec<bool> {
        match &self.secret {
            Some(s) => s.clone(),
            None => {
                let mut rng = RandomStream::new(self.seed)
                    .derive("parity-secret", 0)
                    .rng();
                (0..self.d).map(|_| rng.random()).collect()
            }
        }
    }
}

pub fn gen_parity(
    spec: &ParitySpec,
    n: usize,
    stream: &RandomStream,
) -> Result<Dataset, DataError> {
    spec.validate()?;
    if n == 0 {
        return Err(DataError::Empty { n, d: spec.d });
    }
    let secret = spec.resolved_secret();
    let mut rng = stream.rng();
    let mut raw = Vec::with_capacity(n * spec.d);
    let mut noisy = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let mut y = false;
        for &s in &secret {
            let bit: bool = rng.random();
            y ^= bit & s;
            raw.push(if bit { 1.0 } else { 0.0 });
        }
        let flip = rng.random::<f64>() < spec.alpha;
        noisy.push(if y ^ flip { 1.0 } else { 0.0 });
        labels.push(y as u32);
    }
    let (features, dim, oracle, tag) = match spec.repr {
        ParityRepr::Raw => (raw, spec.d, 0.0, "raw"),
        ParityRepr::NoisyLabel => (noisy, 1, binary_entropy(spec.alpha), "noisy"),
    };
    Dataset::new(
        format!("parity-{tag}-d{}", spec.d),
        features,
        labels,
        dim,
        2,
    )?
    .with_oracle_loss(oracle)
}

/// Two balanced classes with spherical unit-variance Gaussian features
/// centered at `±mu·e₁`.
pub fn gen_gaussian_task(
    d: usize,
    mu: f64,
    n: usize,
    stream: &RandomStream,
) -> Result<Dataset, DataError> {
    if d == 0 || n == 0 {
        return Err(DataError::Empty { n, d });
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(DataError::InvalidSpec(format!(
            "separation mu must be >= 0, got {mu}"
        )));
    }
    let mut rng = stream.rng();
    let mut features = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let y: bool = rng.random();
        for j in 0..d {
            let z: f64 = StandardNormal.sample(&mut rng);
            let shift = if j == 0 {
                if y {
                    mu
                } else {
                    -mu
                }
            } else {
                0.0
            };
            features.push((z + shift) as f32);
        }
        labels.push(y as u32);
    }
    Dataset::new(format!("gaussian-mu{mu}-d{d}"), features, labels, d, 2)?
        .with_oracle_loss(gaussian_bayes_loss(mu))
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Entropy (nats) of a Bernoulli variable with log-odds `a`.
fn entropy_from_logit(a: f64) -> f64 {
    let p = 1.0 / (1.0 + (-a).exp());
    p * softplus(-a) + (1.0 - p) * softplus(a)
}

/// Bayes negative log-likelihood `H(Y|X)` of the Gaussian task.
///
/// The posterior log-odds at `x₁` is `2·mu·x₁`; by symmetry the expectation
/// reduces to one Gaussian integral, evaluated with composite Simpson on
/// `x₁ = mu + t`, `t ∈ [-12, 12]`.
pub fn gaussian_bayes_loss(mu: f64) -> f64 {
    const HALF_WIDTH: f64 = 12.0;
    const INTERVALS: usize = 4000;
    let h = 2.0 * HALF_WIDTH / INTERVALS as f64;
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let f = |t: f64| norm * (-0.5 * t * t).exp() * entropy_from_logit(2.0 * mu * (mu + t));
    let mut sum = f(-HALF_WIDTH) + f(HALF_WIDTH);
    for i in 1..INTERVALS {
        let t = -HALF_WIDTH + i as f64 * h;
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(t);
    }
    (sum * h / 3.0).max(0.0)
}

/// Probability that `n` uniform vectors in `{0,1}^d` span `GF(2)^d`.
pub fn linear_independence_prob(d: usize, n: usize) -> f64 {
    if n < d {
        return 0.0;
    }
    (0..d).map(|i| 1.0 - (i as f64 - n as f64).exp2()).product()
}

/// `-α ln α - (1-α) ln(1-α)` in nats, with `0 ln 0 = 0`.
pub fn binary_entropy(alpha: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.ln() };
    term(alpha) + term(1.0 - alpha)
}

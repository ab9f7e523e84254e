//! Model structure, forward pass, mean-squared-error backpropagation, and
//! evaluation.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Samples per parallel reduction chunk. Chunk boundaries are fixed so the
/// partial sums and their sequential final reduction are bit-stable no matter
/// how rayon schedules the chunks.
const REDUCE_CHUNK: usize = 64;

/// One training or evaluation sample: a feature vector and its target output
/// vector (one-hot for classification).
#[derive(Debug, Clone)]
pub struct LabeledVector {
    pub features: Vec<f64>,
    pub target: Vec<f64>,
}

impl LabeledVector {
    /// Builds a sample with a one-hot target for `class`.
    pub fn from_class(features: Vec<f64>, class: usize, n_out: usize) -> Self {
        LabeledVector {
            features,
            target: one_hot(class, n_out),
        }
    }

    /// The class encoded in the target vector (argmax, lowest index on ties).
    pub fn class(&self) -> usize {
        argmax(&self.target)
    }
}

/// One-hot vector of length `n_out` with a 1 at `class`.
pub fn one_hot(class: usize, n_out: usize) -> Vec<f64> {
    let mut v = vec![0.0; n_out];
    v[class] = 1.0;
    v
}

/// One-hidden-layer perceptron with logistic sigmoid activations on the
/// hidden and output layers.
///
/// Weight matrices are row-major: `w1` has `n_hidden` rows of `n_in`, `w2`
/// has `n_out` rows of `n_hidden`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub n_in: usize,
    pub n_hidden: usize,
    pub n_out: usize,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl MlpModel {
    /// Total number of weights and biases.
    pub fn param_count(&self) -> usize {
        self.n_hidden * self.n_in + self.n_hidden + self.n_out * self.n_hidden + self.n_out
    }

    /// Flattens all parameters in the canonical order w1, b1, w2, b2. The
    /// optimizer state and the gradient use exactly this layout.
    pub fn flatten(&self) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.param_count());
        x.extend_from_slice(&self.w1);
        x.extend_from_slice(&self.b1);
        x.extend_from_slice(&self.w2);
        x.extend_from_slice(&self.b2);
        x
    }

    /// Rebuilds a model from a flat parameter vector in [`flatten`] order.
    ///
    /// [`flatten`]: MlpModel::flatten
    pub fn from_flat(n_in: usize, n_hidden: usize, n_out: usize, x: &[f64]) -> Result<Self> {
        let expected = n_hidden * n_in + n_hidden + n_out * n_hidden + n_out;
        if x.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: x.len(),
            });
        }
        let mut off = 0;
        let mut take = |len: usize| {
            let s = x[off..off + len].to_vec();
            off += len;
            s
        };
        Ok(MlpModel {
            n_in,
            n_hidden,
            n_out,
            w1: take(n_hidden * n_in),
            b1: take(n_hidden),
            w2: take(n_out * n_hidden),
            b2: take(n_out),
        })
    }

    pub fn all_finite(&self) -> bool {
        self.w1
            .iter()
            .chain(&self.b1)
            .chain(&self.w2)
            .chain(&self.b2)
            .all(|v| v.is_finite())
    }
}

/// Initializes a model with weights drawn uniformly from
/// [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer and zero biases. The same
/// seed always produces the same model, bit for bit.
pub fn init_model(n_in: usize, n_hidden: usize, n_out: usize, seed: u64) -> Result<MlpModel> {
    if n_in == 0 {
        return Err(Error::ZeroDimension("n_in"));
    }
    if n_hidden == 0 {
        return Err(Error::ZeroDimension("n_hidden"));
    }
    if n_out == 0 {
        return Err(Error::ZeroDimension("n_out"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound1 = 1.0 / (n_in as f64).sqrt();
    let w1 = (0..n_hidden * n_in)
        .map(|_| rng.random_range(-bound1..=bound1))
        .collect();
    let bound2 = 1.0 / (n_hidden as f64).sqrt();
    let w2 = (0..n_out * n_hidden)
        .map(|_| rng.random_range(-bound2..=bound2))
        .collect();
    Ok(MlpModel {
        n_in,
        n_hidden,
        n_out,
        w1,
        b1: vec![0.0; n_hidden],
        w2,
        b2: vec![0.0; n_out],
    })
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn check_input(m: &MlpModel, x: &[f64]) -> Result<()> {
    if x.len() != m.n_in {
        return Err(Error::DimensionMismatch {
            expected: m.n_in,
            actual: x.len(),
        });
    }
    Ok(())
}

fn forward_parts(m: &MlpModel, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut hidden = Vec::with_capacity(m.n_hidden);
    for j in 0..m.n_hidden {
        let row = &m.w1[j * m.n_in..(j + 1) * m.n_in];
        let z: f64 = row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>() + m.b1[j];
        hidden.push(sigmoid(z));
    }
    let mut output = Vec::with_capacity(m.n_out);
    for o in 0..m.n_out {
        let row = &m.w2[o * m.n_hidden..(o + 1) * m.n_hidden];
        let z: f64 = row.iter().zip(&hidden).map(|(w, h)| w * h).sum::<f64>() + m.b2[o];
        output.push(sigmoid(z));
    }
    (hidden, output)
}

/// Forward pass: h = sigmoid(w1 x + b1), y = sigmoid(w2 h + b2).
pub fn forward(m: &MlpModel, x: &[f64]) -> Result<Vec<f64>> {
    check_input(m, x)?;
    Ok(forward_parts(m, x).1)
}

/// Predicted class: argmax over the output vector, lowest index on ties.
pub fn predict(m: &MlpModel, x: &[f64]) -> Result<usize> {
    Ok(argmax(&forward(m, x)?))
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Mean loss over the batch, `mean(0.5 * ||y - t||^2)`, without gradients.
pub fn batch_loss(m: &MlpModel, batch: &[LabeledVector]) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    check_batch(m, batch)?;
    let partials: Vec<f64> = batch
        .par_chunks(REDUCE_CHUNK)
        .map(|chunk| {
            let mut sum = 0.0;
            for sample in chunk {
                let (_, y) = forward_parts(m, &sample.features);
                sum += 0.5
                    * y.iter()
                        .zip(&sample.target)
                        .map(|(yi, ti)| (yi - ti) * (yi - ti))
                        .sum::<f64>();
            }
            sum
        })
        .collect();
    Ok(partials.iter().sum::<f64>() / batch.len() as f64)
}

fn check_batch(m: &MlpModel, batch: &[LabeledVector]) -> Result<()> {
    for sample in batch {
        check_input(m, &sample.features)?;
        if sample.target.len() != m.n_out {
            return Err(Error::DimensionMismatch {
                expected: m.n_out,
                actual: sample.target.len(),
            });
        }
    }
    Ok(())
}

/// Mean squared-error loss over the batch and its exact backpropagated
/// gradient, flattened in [`MlpModel::flatten`] order.
pub fn loss_and_gradient(m: &MlpModel, batch: &[LabeledVector]) -> Result<(f64, Vec<f64>)> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    check_batch(m, batch)?;
    let n_params = m.param_count();
    let partials: Vec<(f64, Vec<f64>)> = batch
        .par_chunks(REDUCE_CHUNK)
        .map(|chunk| accumulate_chunk(m, chunk))
        .collect();
    // fixed-order final reduction
    let mut loss = 0.0;
    let mut grad = vec![0.0; n_params];
    for (chunk_loss, chunk_grad) in partials {
        loss += chunk_loss;
        for (g, cg) in grad.iter_mut().zip(&chunk_grad) {
            *g += cg;
        }
    }
    let scale = 1.0 / batch.len() as f64;
    loss *= scale;
    for g in &mut grad {
        *g *= scale;
    }
    Ok((loss, grad))
}

fn accumulate_chunk(m: &MlpModel, chunk: &[LabeledVector]) -> (f64, Vec<f64>) {
    let (n_in, n_hidden, n_out) = (m.n_in, m.n_hidden, m.n_out);
    let off_b1 = n_hidden * n_in;
    let off_w2 = off_b1 + n_hidden;
    let off_b2 = off_w2 + n_out * n_hidden;
    let mut grad = vec![0.0; m.param_count()];
    let mut loss = 0.0;
    let mut delta1 = vec![0.0; n_hidden];
    for sample in chunk {
        let x = &sample.features;
        let (h, y) = forward_parts(m, x);
        // output deltas: (y - t) * y * (1 - y)
        let mut delta2 = Vec::with_capacity(n_out);
        for (yo, to) in y.iter().zip(&sample.target) {
            let err = yo - to;
            loss += 0.5 * err * err;
            delta2.push(err * yo * (1.0 - yo));
        }
        // hidden deltas: (w2^T delta2) * h * (1 - h)
        for j in 0..n_hidden {
            let mut back = 0.0;
            for (o, d2) in delta2.iter().enumerate() {
                back += m.w2[o * n_hidden + j] * d2;
            }
            delta1[j] = back * h[j] * (1.0 - h[j]);
        }
        for j in 0..n_hidden {
            let row = &mut grad[j * n_in..(j + 1) * n_in];
            for (gi, xi) in row.iter_mut().zip(x) {
                *gi += delta1[j] * xi;
            }
            grad[off_b1 + j] += delta1[j];
        }
        for o in 0..n_out {
            let row = &mut grad[off_w2 + o * n_hidden..off_w2 + (o + 1) * n_hidden];
            for (gj, hj) in row.iter_mut().zip(&h) {
                *gj += delta2[o] * hj;
            }
            grad[off_b2 + o] += delta2[o];
        }
    }
    (loss, grad)
}

/// Accuracy and confusion counts of a model over a labeled set.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Fraction of samples whose predicted class equals the labeled class.
    pub accuracy: f64,
    /// `confusion[t][p]` counts samples of true class `t` predicted as `p`.
    pub confusion: Vec<Vec<usize>>,
}

/// Evaluates classification accuracy; the true class of each sample is the
/// argmax of its target vector.
pub fn evaluate(m: &MlpModel, data: &[LabeledVector]) -> Result<Evaluation> {
    if data.is_empty() {
        return Err(Error::EmptySet);
    }
    check_batch(m, data)?;
    let mut confusion = vec![vec![0usize; m.n_out]; m.n_out];
    let mut correct = 0usize;
    for sample in data {
        let truth = sample.class();
        let predicted = predict(m, &sample.features)?;
        confusion[truth][predicted] += 1;
        if truth == predicted {
            correct += 1;
        }
    }
    Ok(Evaluation {
        accuracy: correct as f64 / data.len() as f64,
        confusion,
    })
}

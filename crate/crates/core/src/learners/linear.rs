//! Logistic regression and linear SVM by seeded mini-batch (sub)gradient
//! descent with L2 decay.
//!
//! Per step, with batch `B` and weights `phi` summing to one:
//! `w <- w (1 - lr l2) - lr / |B| * sum_{i in B} N phi_i g_i`, where `g_i`
//! is the loss gradient of example `i`. With uniform weights this is the
//! plain mean gradient. The bias is not decayed.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::LinearParams;
use crate::corpus::Label;
use crate::features::SparseVector;
use crate::rng::{streams, SeedStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Loss {
    Logistic,
    Hinge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub loss: Loss,
    pub weights: Vec<f64>,
    pub bias: f64,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

impl LinearModel {
    pub fn margin(&self, x: &SparseVector) -> f64 {
        x.dot_dense(&self.weights) + self.bias
    }

    /// `sigmoid(margin)`; for the SVM this is an uncalibrated surrogate.
    pub fn proba(&self, x: &SparseVector) -> f64 {
        sigmoid(self.margin(x))
    }
}

/// Below this the lazily-applied decay factor is folded back into the weights.
const MIN_SCALE: f64 = 1e-9;

pub(super) fn fit(
    loss: Loss,
    p: &LinearParams,
    x: &[SparseVector],
    y: &[Label],
    phi: &[f64],
    seed: u64,
) -> LinearModel {
    let n = x.len();
    let dim = x[0].dim();
    // w = scale * v keeps the decay O(1) per step.
    let mut v = vec![0.0; dim];
    let mut scale = 1.0;
    let mut bias = 0.0;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = SeedStream::new(seed, streams::LINEAR);
    let decay = 1.0 - p.learning_rate * p.l2;
    let mut coef = Vec::with_capacity(p.batch_size);
    for _ in 0..p.epochs {
        rng.shuffle(&mut order);
        for batch in order.chunks(p.batch_size) {
            coef.clear();
            for &i in batch {
                let m = scale * x[i].dot_dense(&v) + bias;
                let g = match loss {
                    Loss::Logistic => sigmoid(m) - if y[i].is_positive() { 1.0 } else { 0.0 },
                    Loss::Hinge => {
                        let s = y[i].sign();
                        if s * m < 1.0 {
                            -s
                        } else {
                            0.0
                        }
                    }
                };
                coef.push(g * phi[i] * n as f64);
            }
            let step = p.learning_rate / batch.len() as f64;
            scale *= decay;
            if scale < MIN_SCALE {
                for w in &mut v {
                    *w *= scale;
                }
                scale = 1.0;
            }
            for (&i, &c) in batch.iter().zip(&coef) {
                if c == 0.0 {
                    continue;
                }
                let k = step * c / scale;
                for &(j, val) in x[i].entries() {
                    v[j as usize] -= k * val;
                }
                bias -= step * c;
            }
        }
    }
    for w in &mut v {
        *w *= scale;
    }
    LinearModel { loss, weights: v, bias }
}

#[cfg(test)]
mod tests {
    use super::super::{train, ClassifierKind, ClassifierSpec, ModelParameters, TrainedModel};
    use super::*;

    #[test]
    fn sigmoid_symmetry() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!((sigmoid(3.0) + sigmoid(-3.0) - 1.0).abs() < 1e-15);
        assert_eq!(sigmoid(-1000.0), 0.0);
    }

    #[test]
    fn separable_pair() {
        let x = [SparseVector::from_dense(&[1.0, 0.0]), SparseVector::from_dense(&[0.0, 1.0])];
        let y = [Label::Inappropriate, Label::Normal];
        for kind in [ClassifierKind::Lr, ClassifierKind::Svm] {
            let m = train(&ClassifierSpec::new(kind, 5), &x, &y, None).unwrap();
            assert_eq!(m.predict_all(&x).unwrap(), y);
        }
    }

    #[test]
    fn constant_bias_model() {
        let m = TrainedModel {
            spec: ClassifierSpec::new(ClassifierKind::Lr, 0),
            dim: 3,
            parameters: ModelParameters::Linear(LinearModel { loss: Loss::Logistic, weights: vec![0.0; 3], bias: 0.3 }),
        };
        for v in [SparseVector::zeros(3), SparseVector::from_dense(&[4.0, 0.0, 1.0])] {
            assert_eq!(m.predict(&v).unwrap(), Label::Inappropriate);
        }
    }

    #[test]
    fn zero_margin_is_half() {
        let m = LinearModel { loss: Loss::Logistic, weights: vec![1.0, -1.0], bias: 0.0 };
        assert_eq!(m.proba(&SparseVector::from_dense(&[2.0, 2.0])), 0.5);
    }
}

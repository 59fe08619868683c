//! Discrete AdaBoost over labels in {-1, +1}.
//!
//! Round j: fit `h_j` under weights `phi_j`, take the weighted error
//! `eps_j`, set `alpha_j = ln((1 - eps_j) / eps_j) / 2` and update
//! `phi_{j+1}(i) = phi_j(i) exp(-alpha_j h_j(x_i) y_i) / Z_j`.
//! A round with `eps >= 0.5` is discarded and boosting stops; a round with
//! `eps <= 1e-12` is kept with `alpha` capped at `ln(1e12) / 2` and boosting stops.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::bagging::MAX_REDRAWS;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::learners::{check_training, train, ClassifierSpec, TrainedModel};
use crate::rng::{streams, SeedStream};

pub const EPS_FLOOR: f64 = 1e-12;

/// `ln((1 - eps) / eps) / 2`, capped for (near-)perfect hypotheses.
pub fn alpha_for(eps: f64) -> f64 {
    if eps <= EPS_FLOOR {
        0.5 * libm::log(1.0 / EPS_FLOOR)
    } else {
        0.5 * libm::log((1.0 - eps) / eps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub epsilon: f64,
    pub alpha: f64,
    /// Alpha hit the cap because the hypothesis was (near-)perfect.
    pub capped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostState {
    /// Example weights after the last kept round.
    pub phi: Vec<f64>,
    pub rounds: Vec<Round>,
    pub hypotheses: Vec<TrainedModel>,
}

impl BoostState {
    pub fn alphas(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.alpha).collect()
    }

    /// `sum_j alpha_j h_j(x)`.
    pub fn score(&self, x: &SparseVector) -> Result<f64> {
        let mut s = 0.0;
        for (r, h) in self.rounds.iter().zip(&self.hypotheses) {
            s += r.alpha * h.predict(x)?.sign();
        }
        Ok(s)
    }

    /// Sign of the weighted vote; zero is normal.
    pub fn predict(&self, x: &SparseVector) -> Result<Label> {
        Ok(Label::from_positive(self.score(x)? > 0.0))
    }
}

/// Weighted bootstrap of size N (for learners without native weights).
fn weighted_bootstrap(phi: &[f64], y: &[Label], rng: &mut SeedStream) -> Result<Vec<usize>> {
    let mut cum = Vec::with_capacity(phi.len());
    let mut acc = 0.0;
    for p in phi {
        acc += p;
        cum.push(acc);
    }
    let n = phi.len();
    for _ in 0..=MAX_REDRAWS {
        let idx: Vec<usize> = (0..n)
            .map(|_| {
                let u = rng.unit() * acc;
                cum.partition_point(|c| *c <= u).min(n - 1)
            })
            .collect();
        if idx.iter().any(|&i| y[i] != y[idx[0]]) {
            return Ok(idx);
        }
    }
    Err(Error::DegenerateBootstrap { attempts: MAX_REDRAWS + 1 })
}

/// Runs up to `k` rounds. `observe` sees every kept round with the
/// weights it produced.
pub fn fit_observed<F>(
    base: &ClassifierSpec,
    x: &[SparseVector],
    y: &[Label],
    k: usize,
    seed: u64,
    mut observe: F,
) -> Result<BoostState>
where
    F: FnMut(&Round, &TrainedModel, &[f64]),
{
    check_training(x, y, None)?;
    let n = x.len();
    let mut phi = vec![1.0 / n as f64; n];
    let mut rng = SeedStream::new(seed, streams::BOOST);
    let mut rounds = Vec::new();
    let mut hypotheses = Vec::new();
    for _ in 0..k {
        let spec = base.with_seed(rng.child_seed());
        let h = if spec.kind().supports_weights() {
            train(&spec, x, y, Some(&phi))?
        } else {
            let idx = weighted_bootstrap(&phi, y, &mut rng)?;
            let xs: Vec<SparseVector> = idx.iter().map(|&i| x[i].clone()).collect();
            let ys: Vec<Label> = idx.iter().map(|&i| y[i]).collect();
            train(&spec, &xs, &ys, None)?
        };
        let signs: Vec<f64> = h.predict_all(x)?.into_iter().map(Label::sign).collect();
        let epsilon: f64 = (0..n).filter(|&i| signs[i] != y[i].sign()).map(|i| phi[i]).sum();
        if epsilon >= 0.5 {
            break;
        }
        let capped = epsilon <= EPS_FLOOR;
        let alpha = alpha_for(epsilon);
        for i in 0..n {
            phi[i] *= libm::exp(-alpha * signs[i] * y[i].sign());
        }
        let z: f64 = phi.iter().sum();
        for p in &mut phi {
            *p /= z;
        }
        let round = Round { epsilon, alpha, capped };
        observe(&round, &h, &phi);
        rounds.push(round);
        hypotheses.push(h);
        if capped {
            break;
        }
    }
    if rounds.is_empty() {
        return Err(Error::NoUsefulRound);
    }
    Ok(BoostState { phi, rounds, hypotheses })
}

pub fn fit(base: &ClassifierSpec, x: &[SparseVector], y: &[Label], k: usize, seed: u64) -> Result<BoostState> {
    fit_observed(base, x, y, k, seed, |_, _, _| {})
}

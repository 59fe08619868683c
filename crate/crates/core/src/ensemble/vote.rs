//! Hard (weighted label mode) and soft (weighted mean probability) voting.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::learners::TrainedModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VoteMode {
    Hard,
    Soft,
}

fn check_weights(n: usize, weights: Option<&[f64]>) -> Result<Vec<f64>> {
    match weights {
        None => Ok(vec![1.0; n]),
        Some(w) if w.len() != n => Err(Error::LengthMismatch { expected: n, found: w.len() }),
        Some(w) => {
            if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || w.iter().sum::<f64>() <= 0.0 {
                return Err(Error::InvalidWeights("vote weights must be non-negative with a positive sum".into()));
            }
            Ok(w.to_vec())
        }
    }
}

/// Weighted mode; positive wins only with strictly more than half the weight.
pub fn hard_vote(votes: &[Label], weights: Option<&[f64]>) -> Result<Label> {
    if votes.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let w = check_weights(votes.len(), weights)?;
    let total: f64 = w.iter().sum();
    let pos: f64 = votes.iter().zip(&w).filter(|(l, _)| l.is_positive()).map(|(_, w)| w).sum();
    Ok(Label::from_positive(pos > total - pos))
}

/// Weighted mean positive probability, positive when above 0.5.
pub fn soft_vote(probs: &[f64], weights: Option<&[f64]>) -> Result<Label> {
    Ok(Label::from_positive(soft_score(probs, weights)? > 0.5))
}

pub fn soft_score(probs: &[f64], weights: Option<&[f64]>) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let w = check_weights(probs.len(), weights)?;
    let total: f64 = w.iter().sum();
    Ok(probs.iter().zip(&w).map(|(p, w)| p * w).sum::<f64>() / total)
}

/// Votes fitted models on one input.
pub fn vote_predict(
    models: &[TrainedModel],
    x: &SparseVector,
    mode: VoteMode,
    weights: Option<&[f64]>,
) -> Result<Label> {
    match mode {
        VoteMode::Hard => {
            let votes = models.iter().map(|m| m.predict(x)).collect::<Result<Vec<_>>>()?;
            hard_vote(&votes, weights)
        }
        VoteMode::Soft => {
            let probs = models.iter().map(|m| m.predict_proba(x)).collect::<Result<Vec<_>>>()?;
            soft_vote(&probs, weights)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoteModel {
    pub mode: VoteMode,
    pub members: Vec<TrainedModel>,
    pub weights: Option<Vec<f64>>,
}

impl VoteModel {
    pub fn predict(&self, x: &SparseVector) -> Result<Label> {
        vote_predict(&self.members, x, self.mode, self.weights.as_deref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Inappropriate as P, Normal as N};

    #[test]
    fn soft_mean_below_half() {
        assert_eq!(soft_vote(&[0.9, 0.2, 0.2], None).unwrap(), N);
        assert!((soft_score(&[0.9, 0.2, 0.2], None).unwrap() - 1.3 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_hard() {
        assert_eq!(hard_vote(&[P, N, N], Some(&[3.0, 1.0, 1.0])).unwrap(), P);
        assert_eq!(hard_vote(&[P, N, N], None).unwrap(), N);
        assert_eq!(hard_vote(&[P, N], None).unwrap(), N);
    }

    #[test]
    fn weight_errors() {
        assert!(matches!(hard_vote(&[P, N], Some(&[1.0])), Err(Error::LengthMismatch { .. })));
        assert!(matches!(soft_vote(&[0.1], Some(&[-1.0])), Err(Error::InvalidWeights(_))));
        assert_eq!(hard_vote(&[], None), Err(Error::EmptyEnsemble));
    }

    #[test]
    fn single_member() {
        assert_eq!(hard_vote(&[P], None).unwrap(), P);
        assert_eq!(soft_vote(&[0.7], None).unwrap(), P);
    }
}

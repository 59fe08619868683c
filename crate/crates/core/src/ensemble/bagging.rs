//! Bootstrap aggregation with a majority vote.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::learners::{train, ClassifierSpec, TrainedModel};
use crate::rng::{streams, SeedStream};

/// Redraws allowed when a bootstrap sample holds a single class.
pub const MAX_REDRAWS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaggingModel {
    pub members: Vec<TrainedModel>,
}

fn both_classes(idx: &[usize], y: &[Label]) -> bool {
    let first = y[idx[0]];
    idx.iter().any(|&i| y[i] != first)
}

/// Bootstrap indices for member `j`: N uniform draws with replacement from
/// stream `BAGGING_BASE + j` of `seed`, redrawn while single-class.
/// Also returns the seed handed to the member learner.
pub fn bootstrap_indices(seed: u64, member: usize, y: &[Label]) -> Result<(Vec<usize>, u64)> {
    let n = y.len();
    let mut rng = SeedStream::new(seed, streams::BAGGING_BASE + member as u64);
    for _ in 0..=MAX_REDRAWS {
        let idx: Vec<usize> = (0..n).map(|_| rng.index(n)).collect();
        if both_classes(&idx, y) {
            return Ok((idx, rng.child_seed()));
        }
    }
    Err(Error::DegenerateBootstrap { attempts: MAX_REDRAWS + 1 })
}

pub fn fit(base: &ClassifierSpec, x: &[SparseVector], y: &[Label], k: usize, seed: u64) -> Result<BaggingModel> {
    crate::learners::check_training(x, y, None)?;
    let mut members = Vec::with_capacity(k);
    for j in 0..k {
        let (idx, member_seed) = bootstrap_indices(seed, j, y)?;
        let xs: Vec<SparseVector> = idx.iter().map(|&i| x[i].clone()).collect();
        let ys: Vec<Label> = idx.iter().map(|&i| y[i]).collect();
        members.push(train(&base.with_seed(member_seed), &xs, &ys, None)?);
    }
    Ok(BaggingModel { members })
}

/// Unweighted mode of `votes`; a tie is normal.
pub fn majority(votes: &[Label]) -> Label {
    let pos = votes.iter().filter(|l| l.is_positive()).count();
    Label::from_positive(2 * pos > votes.len())
}

impl BaggingModel {
    pub fn member_votes(&self, x: &SparseVector) -> Result<Vec<Label>> {
        self.members.iter().map(|m| m.predict(x)).collect()
    }

    pub fn predict(&self, x: &SparseVector) -> Result<Label> {
        Ok(majority(&self.member_votes(x)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Inappropriate as P, Normal as N};

    #[test]
    fn majority_and_tie() {
        assert_eq!(majority(&[P, P, P, N, N]), P);
        assert_eq!(majority(&[P, P, N, N]), N);
        assert_eq!(majority(&[N]), N);
    }

    #[test]
    fn bootstrap_replays() {
        let y = [P, N, P, N, N, P, N, N];
        let a = bootstrap_indices(42, 3, &y).unwrap();
        assert_eq!(a, bootstrap_indices(42, 3, &y).unwrap());
        assert_ne!(a.0, bootstrap_indices(42, 4, &y).unwrap().0);
        assert_eq!(a.0.len(), y.len());
    }

    #[test]
    fn degenerate_bootstrap_errors() {
        // With two rows a draw is single-class half the time, so about one
        // seed in 2048 exhausts every redraw.
        let y = [P, N];
        let failing = (0..20_000u64).find(|s| bootstrap_indices(*s, 0, &y).is_err());
        assert!(failing.is_some());
        assert_eq!(
            bootstrap_indices(failing.unwrap(), 0, &y),
            Err(Error::DegenerateBootstrap { attempts: MAX_REDRAWS + 1 })
        );
    }
}

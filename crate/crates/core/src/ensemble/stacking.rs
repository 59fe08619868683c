//! Stacked generalization with stratified out-of-fold meta-features.
//!
//! Each base learner is fitted once per fold on the other folds and scores
//! the held-out fold, giving an N x B matrix of positive-class
//! probabilities in which no row was scored by a model that saw it. The meta
//! learner is trained on that matrix; the bases are then refitted on all
//! rows for inference.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::learners::{check_training, train, ClassifierSpec, TrainedModel};
use crate::rng::{streams, SeedStream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackedModel {
    pub bases: Vec<TrainedModel>,
    pub meta: TrainedModel,
    pub folds: usize,
    /// FNV-1a digest of the row-to-fold assignment.
    pub fold_digest: u64,
}

/// One fitted (base, fold) pair: the rows it was trained on and the rows it scored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    pub base: usize,
    pub fold: usize,
    pub trained_on: Vec<usize>,
    pub scored: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LeakageAudit {
    pub fold_of: Vec<usize>,
    pub entries: Vec<AuditEntry>,
}

impl LeakageAudit {
    /// True when every row was scored exactly once per base, by a model
    /// whose training rows exclude it.
    pub fn is_leak_free(&self, n: usize, bases: usize) -> bool {
        let mut scored = vec![0usize; n * bases];
        for e in &self.entries {
            let mut seen = vec![false; n];
            for &r in &e.trained_on {
                seen[r] = true;
            }
            for &r in &e.scored {
                if seen[r] {
                    return false;
                }
                scored[e.base * n + r] += 1;
            }
        }
        scored.iter().all(|&c| c == 1)
    }
}

pub struct StackingFit {
    pub model: StackedModel,
    pub audit: LeakageAudit,
    /// Row i holds the out-of-fold probabilities of every base for example i.
    pub meta_features: Vec<Vec<f64>>,
}

/// Stratified fold ids: each class is shuffled and dealt round-robin, the
/// deal continuing across classes so fold sizes differ by at most one.
pub fn assign_folds(y: &[Label], folds: usize, seed: u64) -> Result<Vec<usize>> {
    let mut fold_of = vec![0usize; y.len()];
    let mut rng = SeedStream::new(seed, streams::FOLDS);
    let mut dealt = 0usize;
    for class in Label::ALL {
        let mut rows: Vec<usize> = (0..y.len()).filter(|&i| y[i] == class).collect();
        if rows.len() < folds {
            return Err(Error::ClassTooSmall { label: class.as_str(), count: rows.len(), parts: folds });
        }
        rng.shuffle(&mut rows);
        for r in rows {
            fold_of[r] = dealt % folds;
            dealt += 1;
        }
    }
    Ok(fold_of)
}

fn fnv1a(values: &[usize]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in (*v as u64).to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

pub fn fit(
    bases: &[ClassifierSpec],
    meta: &ClassifierSpec,
    x: &[SparseVector],
    y: &[Label],
    folds: usize,
    seed: u64,
) -> Result<StackingFit> {
    if folds < 2 {
        return Err(Error::InvalidHyperparameter("stacking needs at least 2 folds".into()));
    }
    if bases.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    check_training(x, y, None)?;
    let n = x.len();
    let fold_of = assign_folds(y, folds, seed)?;
    let mut meta_features = vec![vec![0.0; bases.len()]; n];
    let mut entries = Vec::with_capacity(bases.len() * folds);
    for (b, spec) in bases.iter().enumerate() {
        for f in 0..folds {
            let trained_on: Vec<usize> = (0..n).filter(|&i| fold_of[i] != f).collect();
            let scored: Vec<usize> = (0..n).filter(|&i| fold_of[i] == f).collect();
            let xs: Vec<SparseVector> = trained_on.iter().map(|&i| x[i].clone()).collect();
            let ys: Vec<Label> = trained_on.iter().map(|&i| y[i]).collect();
            let m = train(spec, &xs, &ys, None)?;
            for &i in &scored {
                meta_features[i][b] = m.predict_proba(&x[i])?;
            }
            entries.push(AuditEntry { base: b, fold: f, trained_on, scored });
        }
    }
    let meta_x: Vec<SparseVector> = meta_features.iter().map(|r| SparseVector::from_dense(r)).collect();
    let meta_model = train(meta, &meta_x, y, None)?;
    let refit = bases.iter().map(|s| train(s, x, y, None)).collect::<Result<Vec<_>>>()?;
    let fold_digest = fnv1a(&fold_of);
    Ok(StackingFit {
        model: StackedModel { bases: refit, meta: meta_model, folds, fold_digest },
        audit: LeakageAudit { fold_of, entries },
        meta_features,
    })
}

impl StackedModel {
    pub fn meta_input(&self, x: &SparseVector) -> Result<SparseVector> {
        let probs = self.bases.iter().map(|m| m.predict_proba(x)).collect::<Result<Vec<_>>>()?;
        Ok(SparseVector::from_dense(&probs))
    }

    pub fn predict(&self, x: &SparseVector) -> Result<Label> {
        self.meta.predict(&self.meta_input(x)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::ClassifierKind;
    use Label::{Inappropriate as P, Normal as N};

    #[test]
    fn six_rows_two_folds_audit() {
        let y = [P, N, P, N, P, N];
        let x: Vec<SparseVector> = (0..6)
            .map(|i| SparseVector::from_dense(&[if y[i].is_positive() { 1.0 } else { 0.1 }, i as f64 * 0.01]))
            .collect();
        let lr = ClassifierSpec::new(ClassifierKind::Lr, 1);
        let fit = fit(&[lr, ClassifierSpec::new(ClassifierKind::Dt, 2)], &lr, &x, &y, 2, 7).unwrap();
        assert_eq!(fit.meta_features.len(), 6);
        assert!(fit.meta_features.iter().all(|r| r.len() == 2));
        assert!(fit.audit.is_leak_free(6, 2));
        for e in &fit.audit.entries {
            assert_eq!(e.trained_on.len(), 3);
            assert_eq!(e.scored.len(), 3);
            for &r in &e.scored {
                assert_eq!(fit.audit.fold_of[r], e.fold);
            }
        }
    }

    #[test]
    fn folds_are_stratified_and_errors() {
        let y = [P, P, P, N, N, N, N, N];
        let f = assign_folds(&y, 3, 1).unwrap();
        for fold in 0..3 {
            assert_eq!((0..3).filter(|&i| f[i] == fold).count(), 1);
        }
        assert!(matches!(assign_folds(&y, 4, 1), Err(Error::ClassTooSmall { count: 3, .. })));
    }

    #[test]
    fn audit_detects_leak() {
        let audit = LeakageAudit {
            fold_of: vec![0, 1],
            entries: vec![AuditEntry { base: 0, fold: 0, trained_on: vec![0, 1], scored: vec![0] }],
        };
        assert!(!audit.is_leak_free(2, 1));
    }
}

//! Bagging, AdaBoost, hard / soft voting and stacking over the base learners.
//!
//! Ties resolve to the normal class everywhere.

pub mod bagging;
pub mod boost;
pub mod stacking;
pub mod vote;

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::learners::{train, ClassifierKind, ClassifierSpec};

pub use bagging::BaggingModel;
pub use boost::BoostState;
pub use stacking::{LeakageAudit, StackedModel};
pub use vote::{VoteMode, VoteModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    Bagging,
    Adaboost,
    VoteHard,
    VoteSoft,
    Stacking,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 5] = [
        EnsembleKind::Bagging,
        EnsembleKind::Adaboost,
        EnsembleKind::VoteHard,
        EnsembleKind::VoteSoft,
        EnsembleKind::Stacking,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::Bagging => "bagging",
            EnsembleKind::Adaboost => "adaboost",
            EnsembleKind::VoteHard => "vote-hard",
            EnsembleKind::VoteSoft => "vote-soft",
            EnsembleKind::Stacking => "stacking",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let l = s.trim().to_ascii_lowercase().replace('_', "-");
        EnsembleKind::ALL.into_iter().find(|k| k.as_str() == l).ok_or_else(|| {
            Error::InvalidHyperparameter(format!(
                "unknown ensemble {s:?}; expected bagging, adaboost, vote-hard, vote-soft or stacking"
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    /// One spec for bagging / AdaBoost, one or more for voting, two or more for stacking.
    pub bases: Vec<ClassifierSpec>,
    /// Stacking meta learner.
    pub meta: Option<ClassifierSpec>,
    /// Bagging members or boosting rounds.
    pub k: usize,
    /// Stacking folds.
    pub folds: usize,
    /// Voting weights, one per base.
    pub weights: Option<Vec<f64>>,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, bases: Vec<ClassifierSpec>, seed: u64) -> Self {
        EnsembleSpec {
            kind,
            bases,
            meta: (kind == EnsembleKind::Stacking).then(|| ClassifierSpec::new(ClassifierKind::Lr, seed)),
            k: 10,
            folds: 5,
            weights: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidHyperparameter(m.into()));
        if self.bases.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        match self.kind {
            EnsembleKind::Bagging | EnsembleKind::Adaboost => {
                if self.bases.len() != 1 {
                    return bad("bagging and adaboost take exactly one base learner");
                }
                if self.k == 0 {
                    return bad("k must be at least 1");
                }
            }
            EnsembleKind::VoteHard | EnsembleKind::VoteSoft => {
                if let Some(w) = &self.weights {
                    if w.len() != self.bases.len() {
                        return Err(Error::LengthMismatch { expected: self.bases.len(), found: w.len() });
                    }
                }
            }
            EnsembleKind::Stacking => {
                if self.bases.len() < 2 {
                    return bad("stacking needs at least two base learners");
                }
                if self.meta.is_none() {
                    return bad("stacking needs a meta learner");
                }
                if self.folds < 2 {
                    return bad("stacking needs at least 2 folds");
                }
            }
        }
        for b in &self.bases {
            b.params.validate()?;
        }
        Ok(())
    }

    /// Short label such as `bagging(dt)` or `stacking(lr+svm+rf)`.
    pub fn label(&self) -> alloc::string::String {
        let names: Vec<&str> = self.bases.iter().map(|b| b.kind().as_str()).collect();
        format!("{}({})", self.kind, names.join("+"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnsembleModel {
    Bagging(BaggingModel),
    Adaboost(BoostState),
    Vote(VoteModel),
    Stacking(StackedModel),
}

impl EnsembleModel {
    pub fn predict(&self, x: &SparseVector) -> Result<Label> {
        match self {
            EnsembleModel::Bagging(m) => m.predict(x),
            EnsembleModel::Adaboost(m) => m.predict(x),
            EnsembleModel::Vote(m) => m.predict(x),
            EnsembleModel::Stacking(m) => m.predict(x),
        }
    }

    pub fn predict_all(&self, xs: &[SparseVector]) -> Result<Vec<Label>> {
        xs.iter().map(|x| self.predict(x)).collect()
    }
}

/// Fits any ensemble kind. Stacking's leakage audit is checked here and
/// then dropped; call [`stacking::fit`] directly to keep it.
pub fn fit(spec: &EnsembleSpec, x: &[SparseVector], y: &[Label]) -> Result<EnsembleModel> {
    spec.validate()?;
    Ok(match spec.kind {
        EnsembleKind::Bagging => EnsembleModel::Bagging(bagging::fit(&spec.bases[0], x, y, spec.k, spec.seed)?),
        EnsembleKind::Adaboost => EnsembleModel::Adaboost(boost::fit(&spec.bases[0], x, y, spec.k, spec.seed)?),
        EnsembleKind::VoteHard | EnsembleKind::VoteSoft => {
            let members = spec.bases.iter().map(|b| train(b, x, y, None)).collect::<Result<Vec<_>>>()?;
            let mode = if spec.kind == EnsembleKind::VoteHard { VoteMode::Hard } else { VoteMode::Soft };
            EnsembleModel::Vote(VoteModel { mode, members, weights: spec.weights.clone() })
        }
        EnsembleKind::Stacking => {
            let meta = spec.meta.as_ref().ok_or(Error::EmptyEnsemble)?;
            let fit = stacking::fit(&spec.bases, meta, x, y, spec.folds, spec.seed)?;
            debug_assert!(fit.audit.is_leak_free(x.len(), spec.bases.len()));
            EnsembleModel::Stacking(fit.model)
        }
    })
}

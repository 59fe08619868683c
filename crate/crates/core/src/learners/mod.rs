//! Base classifiers behind one train / predict contract.
//!
//! Every model scores the positive (inappropriate) class with
//! `predict_proba` and predicts it when that probability is strictly above
//! 0.5, so ties go to the normal class and `predict` always agrees with the
//! argmax of the probabilities.

mod knn;
mod linear;
mod tree;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;

pub use knn::KnnModel;
pub use linear::{LinearModel, Loss};
pub use tree::{Forest, Node, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Lr,
    Svm,
    Dt,
    Rf,
    Kn,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 5] =
        [ClassifierKind::Lr, ClassifierKind::Svm, ClassifierKind::Dt, ClassifierKind::Rf, ClassifierKind::Kn];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::Lr => "lr",
            ClassifierKind::Svm => "svm",
            ClassifierKind::Dt => "dt",
            ClassifierKind::Rf => "rf",
            ClassifierKind::Kn => "kn",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            ClassifierKind::Lr => "Logistic Regression",
            ClassifierKind::Svm => "SVM",
            ClassifierKind::Dt => "Decision Tree",
            ClassifierKind::Rf => "Random Forest",
            ClassifierKind::Kn => "K-Neighbour",
        }
    }

    /// Whether training honours per-example weights natively.
    pub fn supports_weights(self) -> bool {
        !matches!(self, ClassifierKind::Kn)
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let l = s.trim().to_ascii_lowercase();
        ClassifierKind::ALL
            .into_iter()
            .find(|k| k.as_str() == l)
            .ok_or_else(|| Error::InvalidHyperparameter(format!("unknown model {s:?}; expected lr, svm, dt, rf or kn")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinearParams {
    pub learning_rate: f64,
    pub l2: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

impl Default for LinearParams {
    fn default() -> Self {
        LinearParams { learning_rate: 0.1, l2: 1e-4, epochs: 30, batch_size: 64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TreeParams {
    pub max_depth: usize,
    /// Minimum number of training rows in each leaf.
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { max_depth: 20, min_leaf: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    /// Features tried per node; `None` means `ceil(sqrt(V))`.
    pub max_features: Option<usize>,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams { n_trees: 100, max_depth: 20, min_leaf: 2, max_features: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams { k: 5 }
    }
}

/// Kind-specific hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Hyperparameters {
    Lr(LinearParams),
    Svm(LinearParams),
    Dt(TreeParams),
    Rf(ForestParams),
    Kn(KnnParams),
}

impl Hyperparameters {
    pub fn defaults(kind: ClassifierKind) -> Self {
        match kind {
            ClassifierKind::Lr => Hyperparameters::Lr(LinearParams::default()),
            ClassifierKind::Svm => Hyperparameters::Svm(LinearParams::default()),
            ClassifierKind::Dt => Hyperparameters::Dt(TreeParams::default()),
            ClassifierKind::Rf => Hyperparameters::Rf(ForestParams::default()),
            ClassifierKind::Kn => Hyperparameters::Kn(KnnParams::default()),
        }
    }

    pub fn kind(&self) -> ClassifierKind {
        match self {
            Hyperparameters::Lr(_) => ClassifierKind::Lr,
            Hyperparameters::Svm(_) => ClassifierKind::Svm,
            Hyperparameters::Dt(_) => ClassifierKind::Dt,
            Hyperparameters::Rf(_) => ClassifierKind::Rf,
            Hyperparameters::Kn(_) => ClassifierKind::Kn,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidHyperparameter(m.into()));
        match *self {
            Hyperparameters::Lr(p) | Hyperparameters::Svm(p) => {
                if !(p.learning_rate > 0.0 && p.learning_rate.is_finite()) {
                    return bad("learning_rate must be a positive number");
                }
                if !(p.l2 >= 0.0 && p.l2.is_finite()) || p.l2 * p.learning_rate >= 1.0 {
                    return bad("l2 must be non-negative with l2 * learning_rate < 1");
                }
                if p.epochs == 0 || p.batch_size == 0 {
                    return bad("epochs and batch_size must be at least 1");
                }
            }
            Hyperparameters::Dt(p) => {
                if p.max_depth == 0 || p.min_leaf == 0 {
                    return bad("max_depth and min_leaf must be at least 1");
                }
            }
            Hyperparameters::Rf(p) => {
                if p.n_trees == 0 || p.max_depth == 0 || p.min_leaf == 0 || p.max_features == Some(0) {
                    return bad("n_trees, max_depth, min_leaf and max_features must be at least 1");
                }
            }
            Hyperparameters::Kn(p) => {
                if p.k == 0 {
                    return bad("k must be at least 1");
                }
            }
        }
        Ok(())
    }
}

/// A learner kind with its hyperparameters and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub params: Hyperparameters,
    pub seed: u64,
}

impl ClassifierSpec {
    pub fn new(kind: ClassifierKind, seed: u64) -> Self {
        ClassifierSpec { params: Hyperparameters::defaults(kind), seed }
    }

    pub fn kind(&self) -> ClassifierKind {
        self.params.kind()
    }

    pub fn with_seed(self, seed: u64) -> Self {
        ClassifierSpec { seed, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelParameters {
    Linear(LinearModel),
    Tree(Tree),
    Forest(Forest),
    Knn(KnnModel),
}

/// A fitted base classifier. Class order is fixed: normal is -1, inappropriate is +1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub spec: ClassifierSpec,
    pub dim: usize,
    pub parameters: ModelParameters,
}

/// Checks the training contract and returns the weights to use (uniform
/// `1/N` when none are given).
pub(crate) fn check_training(x: &[SparseVector], y: &[Label], weights: Option<&[f64]>) -> Result<(usize, Vec<f64>)> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { expected: x.len(), found: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::EmptyTrainingSet);
    }
    let dim = x[0].dim();
    if let Some(v) = x.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
    }
    if !(y.iter().any(|l| l.is_positive()) && y.iter().any(|l| !l.is_positive())) {
        return Err(Error::SingleClass);
    }
    let n = x.len();
    let w = match weights {
        None => vec![1.0 / n as f64; n],
        Some(w) => {
            if w.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: w.len() });
            }
            if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::InvalidWeights("weights must be finite and non-negative".into()));
            }
            let s: f64 = w.iter().sum();
            if (s - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidWeights(format!("weights sum to {s}, expected 1")));
            }
            w.to_vec()
        }
    };
    Ok((dim, w))
}

/// Fits a base classifier. `weights`, when given, must be non-negative and
/// sum to one; KN ignores them.
pub fn train(spec: &ClassifierSpec, x: &[SparseVector], y: &[Label], weights: Option<&[f64]>) -> Result<TrainedModel> {
    spec.params.validate()?;
    let (dim, w) = check_training(x, y, weights)?;
    let parameters = match spec.params {
        Hyperparameters::Lr(p) => ModelParameters::Linear(linear::fit(Loss::Logistic, &p, x, y, &w, spec.seed)),
        Hyperparameters::Svm(p) => ModelParameters::Linear(linear::fit(Loss::Hinge, &p, x, y, &w, spec.seed)),
        Hyperparameters::Dt(p) => ModelParameters::Tree(tree::fit_tree(&p, x, y, &w, None)),
        Hyperparameters::Rf(p) => ModelParameters::Forest(tree::fit_forest(&p, x, y, &w, dim, spec.seed)),
        Hyperparameters::Kn(p) => ModelParameters::Knn(KnnModel::fit(&p, x, y)),
    };
    Ok(TrainedModel { spec: *spec, dim, parameters })
}

impl TrainedModel {
    pub fn kind(&self) -> ClassifierKind {
        self.spec.kind()
    }

    fn check_dim(&self, x: &SparseVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        Ok(())
    }

    /// Probability of the positive class.
    pub fn predict_proba(&self, x: &SparseVector) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match &self.parameters {
            ModelParameters::Linear(m) => m.proba(x),
            ModelParameters::Tree(t) => t.leaf_value(x),
            ModelParameters::Forest(f) => f.vote_fraction(x),
            ModelParameters::Knn(m) => m.positive_fraction(x),
        })
    }

    pub fn predict(&self, x: &SparseVector) -> Result<Label> {
        Ok(Label::from_positive(self.predict_proba(x)? > 0.5))
    }

    pub fn predict_all(&self, xs: &[SparseVector]) -> Result<Vec<Label>> {
        xs.iter().map(|x| self.predict(x)).collect()
    }

    pub fn predict_proba_all(&self, xs: &[SparseVector]) -> Result<Vec<f64>> {
        xs.iter().map(|x| self.predict_proba(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStream;
    use Label::{Inappropriate as P, Normal as N};

    fn toy() -> (Vec<SparseVector>, Vec<Label>) {
        let mut rng = SeedStream::new(3, 0);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..60 {
            let pos = i % 2 == 0;
            let a = rng.unit() + if pos { 1.0 } else { 0.0 };
            let b = rng.unit() + if pos { 0.0 } else { 1.0 };
            x.push(SparseVector::from_dense(&[a, b, rng.unit() * 0.1]));
            y.push(Label::from_positive(pos));
        }
        (x, y)
    }

    #[test]
    fn contract_errors() {
        let spec = ClassifierSpec::new(ClassifierKind::Lr, 1);
        let a = SparseVector::from_dense(&[1.0, 0.0]);
        let b = SparseVector::from_dense(&[0.0, 1.0, 0.0]);
        assert_eq!(train(&spec, &[a.clone(), a.clone()], &[P, P], None), Err(Error::SingleClass));
        assert!(matches!(train(&spec, &[a.clone(), b], &[P, N], None), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(train(&spec, core::slice::from_ref(&a), &[P], None), Err(Error::EmptyTrainingSet)));
        assert!(matches!(
            train(&spec, &[a.clone(), a.clone()], &[P, N], Some(&[0.7, 0.7])),
            Err(Error::InvalidWeights(_))
        ));
        let m = train(&spec, &[a.clone(), SparseVector::from_dense(&[0.0, 1.0])], &[P, N], None).unwrap();
        assert!(m.predict(&SparseVector::zeros(5)).is_err());
    }

    #[test]
    fn every_kind_learns_toy_and_respects_argmax() {
        let (x, y) = toy();
        for kind in ClassifierKind::ALL {
            let m = train(&ClassifierSpec::new(kind, 9), &x, &y, None).unwrap();
            let preds = m.predict_all(&x).unwrap();
            let acc = preds.iter().zip(&y).filter(|(a, b)| a == b).count() as f64 / y.len() as f64;
            assert!(acc >= 0.9, "{kind}: {acc}");
            for v in &x {
                let p = m.predict_proba(v).unwrap();
                assert!((0.0..=1.0).contains(&p));
                assert_eq!(m.predict(v).unwrap(), Label::from_positive(p > 0.5));
            }
        }
    }

    #[test]
    fn uniform_weights_equal_omitted() {
        let (x, y) = toy();
        let w = vec![1.0 / x.len() as f64; x.len()];
        for kind in ClassifierKind::ALL {
            let spec = ClassifierSpec::new(kind, 4);
            assert_eq!(train(&spec, &x, &y, None).unwrap(), train(&spec, &x, &y, Some(&w)).unwrap(), "{kind}");
        }
    }

    #[test]
    fn training_is_deterministic() {
        let (x, y) = toy();
        for kind in ClassifierKind::ALL {
            let spec = ClassifierSpec::new(kind, 77);
            assert_eq!(train(&spec, &x, &y, None).unwrap(), train(&spec, &x, &y, None).unwrap());
        }
    }

    #[test]
    fn hyperparameter_ranges() {
        let mut spec = ClassifierSpec::new(ClassifierKind::Kn, 0);
        spec.params = Hyperparameters::Kn(KnnParams { k: 0 });
        let (x, y) = toy();
        assert!(matches!(train(&spec, &x, &y, None), Err(Error::InvalidHyperparameter(_))));
        assert!("xgb".parse::<ClassifierKind>().is_err());
        assert_eq!("RF".parse::<ClassifierKind>().unwrap(), ClassifierKind::Rf);
    }
}

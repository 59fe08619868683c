//! Experiment configuration (TOML) and its validation.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tweetseq_core::ensemble::{EnsembleKind, EnsembleSpec};
use tweetseq_core::features::{Vectorizer, DEFAULT_MAX_FEATURES, DEFAULT_MIN_DF};
use tweetseq_core::learners::{ForestParams, Hyperparameters, KnnParams, LinearParams, TreeParams};
use tweetseq_core::pipeline::validate_sequence;
use tweetseq_core::{ClassifierKind, ClassifierSpec, Sequence};

use crate::datasets::DatasetFormat;
use crate::lexicon;
use crate::Error;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub format: DatasetFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub ratios: [f64; 3],
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { ratios: [0.8, 0.1, 0.1] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureConfig {
    pub min_df: usize,
    pub max_features: Option<usize>,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig { min_df: DEFAULT_MIN_DF, max_features: Some(DEFAULT_MAX_FEATURES) }
    }
}

/// Per-kind hyperparameter overrides; absent kinds use the defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HyperparameterConfig {
    pub lr: Option<LinearParams>,
    pub svm: Option<LinearParams>,
    pub dt: Option<TreeParams>,
    pub rf: Option<ForestParams>,
    pub kn: Option<KnnParams>,
}

impl HyperparameterConfig {
    pub fn params(&self, kind: ClassifierKind) -> Hyperparameters {
        match kind {
            ClassifierKind::Lr => Hyperparameters::Lr(self.lr.unwrap_or_default()),
            ClassifierKind::Svm => Hyperparameters::Svm(self.svm.unwrap_or_default()),
            ClassifierKind::Dt => Hyperparameters::Dt(self.dt.unwrap_or_default()),
            ClassifierKind::Rf => Hyperparameters::Rf(self.rf.unwrap_or_default()),
            ClassifierKind::Kn => Hyperparameters::Kn(self.kn.unwrap_or_default()),
        }
    }

    pub fn spec(&self, kind: ClassifierKind, seed: u64) -> ClassifierSpec {
        ClassifierSpec { params: self.params(kind), seed }
    }
}

fn default_ensemble_sequences() -> Vec<String> {
    vec!["T8".into(), "PROPOSED".into()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub kind: EnsembleKind,
    pub bases: Vec<ClassifierKind>,
    #[serde(default)]
    pub meta: Option<ClassifierKind>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub folds: Option<usize>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default = "default_ensemble_sequences")]
    pub sequences: Vec<String>,
}

impl EnsembleConfig {
    /// Defaults used when `--ensemble` names a kind the config lacks.
    pub fn default_for(kind: EnsembleKind) -> Self {
        let (bases, k) = match kind {
            EnsembleKind::Bagging => (vec![ClassifierKind::Dt], Some(15)),
            EnsembleKind::Adaboost => (vec![ClassifierKind::Lr], Some(10)),
            _ => (vec![ClassifierKind::Lr, ClassifierKind::Svm, ClassifierKind::Rf], None),
        };
        EnsembleConfig {
            kind,
            bases,
            meta: None,
            k,
            folds: None,
            weights: None,
            sequences: default_ensemble_sequences(),
        }
    }

    pub fn spec(&self, hp: &HyperparameterConfig, seed: u64) -> EnsembleSpec {
        let mut spec = EnsembleSpec::new(self.kind, self.bases.iter().map(|k| hp.spec(*k, seed)).collect(), seed);
        if let Some(m) = self.meta {
            spec.meta = Some(hp.spec(m, seed));
        }
        if let Some(k) = self.k {
            spec.k = k;
        }
        if let Some(f) = self.folds {
            spec.folds = f;
        }
        spec.weights = self.weights.clone();
        spec
    }
}

fn default_vectorizers() -> Vec<Vectorizer> {
    vec![Vectorizer::Tfidf]
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub resources: Option<PathBuf>,
    #[serde(default = "default_vectorizers")]
    pub vectorizers: Vec<Vectorizer>,
    #[serde(default = "yes")]
    pub spell_correct: bool,
    #[serde(default)]
    pub strict_constraints: bool,
    /// Worker threads for the grid; 0 uses one per core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub save_models: bool,
    pub sequences: Vec<String>,
    #[serde(default)]
    pub models: Vec<ClassifierKind>,
    pub datasets: Vec<DatasetSpec>,
    #[serde(default)]
    pub split: SplitConfig,
    #[serde(default)]
    pub features: FeatureConfig,
    #[serde(default)]
    pub hyperparameters: HyperparameterConfig,
    #[serde(default)]
    pub ensembles: Vec<EnsembleConfig>,
    /// Directory relative paths resolve against; the config file's directory.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// Command-line overrides applied on top of a loaded config.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub sequence: Option<String>,
    pub vectorizer: Option<Vectorizer>,
    pub model: Option<ClassifierKind>,
    pub ensemble: Option<EnsembleKind>,
    pub strict: bool,
    pub no_spell: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self, toml::de::Error> {
        let mut cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.base_dir = base_dir.to_path_buf();
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        ExperimentConfig::from_toml(&text, &base)
            .map_err(|e| Error::Config { path: path.to_path_buf(), message: e.to_string() })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.resolve(self.output_dir.as_deref().unwrap_or(Path::new("out")))
    }

    pub fn resource_dir(&self) -> Option<PathBuf> {
        lexicon::resource_dir(self.resources.as_ref().map(|p| self.resolve(p)).as_deref())
    }

    /// `--model` and `--ensemble` replace the configured lists; naming only
    /// one of them clears the other.
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(d) = &o.output_dir {
            self.output_dir = Some(std::env::current_dir().map(|c| c.join(d)).unwrap_or_else(|_| d.clone()));
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(s) = &o.sequence {
            self.sequences = vec![s.clone()];
            for e in &mut self.ensembles {
                e.sequences = vec![s.clone()];
            }
        }
        if let Some(v) = o.vectorizer {
            self.vectorizers = vec![v];
        }
        if o.model.is_some() || o.ensemble.is_some() {
            self.models = o.model.into_iter().collect();
            self.ensembles = match o.ensemble {
                None => Vec::new(),
                Some(kind) => {
                    let mut kept: Vec<EnsembleConfig> =
                        self.ensembles.iter().filter(|e| e.kind == kind).cloned().collect();
                    if kept.is_empty() {
                        let mut d = EnsembleConfig::default_for(kind);
                        if let Some(s) = &o.sequence {
                            d.sequences = vec![s.clone()];
                        }
                        kept.push(d);
                    }
                    kept
                }
            };
        }
        if o.strict {
            self.strict_constraints = true;
        }
        if o.no_spell {
            self.spell_correct = false;
        }
    }

    /// Hex SHA-256 of the canonical JSON form, output directory excluded.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.output_dir = None;
        digest_json(&c)
    }
}

pub fn digest_json<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("config values serialize");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub items: Vec<Diagnostic>,
}

impl Diagnostics {
    fn error(&mut self, message: impl Into<String>) {
        self.items.push(Diagnostic { severity: Severity::Error, message: message.into() });
    }

    fn warning(&mut self, message: impl Into<String>) {
        self.items.push(Diagnostic { severity: Severity::Warning, message: message.into() });
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.items.iter().any(|d| d.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.items.iter().filter(|d| d.severity == Severity::Error)
    }
}

/// Reads and checks a config file. Only an unreadable file is an `Err`.
pub fn validate_config(path: &Path) -> Result<Diagnostics, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(match ExperimentConfig::from_toml(&text, &base) {
        Ok(cfg) => check(&cfg),
        Err(e) => {
            let mut d = Diagnostics::default();
            d.error(format!("schema: {}", e.message().trim()));
            d
        }
    })
}

fn check_sequence(text: &str, strict: bool, d: &mut Diagnostics) {
    match Sequence::resolve(text) {
        Err(e) => d.error(format!("sequence {text:?}: {e}")),
        Ok(seq) => {
            for v in validate_sequence(&seq).violations {
                let msg = format!("sequence {}: {v}", seq.alias);
                if strict {
                    d.error(msg);
                } else {
                    d.warning(msg);
                }
            }
        }
    }
}

/// Checks an already-parsed config: ranges, sequences, ensemble shapes and
/// that every referenced file exists.
pub fn check(cfg: &ExperimentConfig) -> Diagnostics {
    let mut d = Diagnostics::default();
    if cfg.version != CONFIG_VERSION {
        d.error(format!("unsupported config version {} (expected {CONFIG_VERSION})", cfg.version));
    }
    if cfg.datasets.is_empty() {
        d.error("at least one dataset is required");
    }
    for ds in &cfg.datasets {
        let p = cfg.resolve(&ds.path);
        if !p.is_file() {
            d.error(format!("dataset not found: {}", p.display()));
        }
    }
    if cfg.sequences.is_empty() {
        d.error("at least one sequence is required");
    }
    if cfg.models.is_empty() && cfg.ensembles.is_empty() {
        d.error("at least one model or ensemble is required");
    }
    if cfg.vectorizers.is_empty() {
        d.error("at least one vectorizer is required");
    }
    let mut seen = BTreeSet::new();
    for s in cfg.sequences.iter().chain(cfg.ensembles.iter().flat_map(|e| &e.sequences)) {
        if seen.insert(s.clone()) {
            check_sequence(s, cfg.strict_constraints, &mut d);
        }
    }
    let r = cfg.split.ratios;
    if r.iter().any(|x| !(x.is_finite() && *x > 0.0)) || (r.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        d.error(format!("split.ratios {r:?} must be positive and sum to 1"));
    }
    if cfg.features.min_df == 0 {
        d.error("features.min_df must be at least 1");
    }
    if cfg.features.max_features == Some(0) {
        d.error("features.max_features must be at least 1");
    }
    for kind in ClassifierKind::ALL {
        if let Err(e) = cfg.hyperparameters.params(kind).validate() {
            d.error(format!("hyperparameters.{kind}: {e}"));
        }
    }
    for (i, e) in cfg.ensembles.iter().enumerate() {
        if e.sequences.is_empty() {
            d.error(format!("ensembles[{i}]: at least one sequence is required"));
        }
        if let Err(err) = e.spec(&cfg.hyperparameters, cfg.seed).validate() {
            d.error(format!("ensembles[{i}] ({}): {err}", e.kind));
        }
    }
    if let Some(dir) = cfg.resource_dir() {
        if !dir.is_dir() {
            d.error(format!("resource directory not found: {}", dir.display()));
        } else {
            for p in lexicon::missing_files(&dir) {
                d.error(format!("lexicon file not found: {}", p.display()));
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
version = 1
seed = 7
sequences = ["PROPOSED"]
models = ["lr"]

[[datasets]]
path = "Cargo.toml"
format = "generic_csv"
"#;

    fn parse(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml(text, Path::new(env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    #[test]
    fn minimal_config_defaults() {
        let c = parse(MINIMAL);
        assert_eq!(c.split.ratios, [0.8, 0.1, 0.1]);
        assert_eq!(c.vectorizers, vec![Vectorizer::Tfidf]);
        assert!(c.spell_correct);
        assert!(check(&c).is_empty(), "{:?}", check(&c));
    }

    #[test]
    fn seed_is_mandatory_and_unknown_keys_rejected() {
        assert!(ExperimentConfig::from_toml(&MINIMAL.replace("seed = 7", ""), Path::new(".")).is_err());
        assert!(ExperimentConfig::from_toml(&format!("colour = 1\n{MINIMAL}"), Path::new(".")).is_err());
    }

    #[test]
    fn constraint_violation_is_warning_unless_strict() {
        let mut c = parse(&MINIMAL.replace("\"PROPOSED\"", "\"T8\""));
        let d = check(&c);
        assert!(!d.has_errors());
        assert_eq!(d.items.len(), 1);
        assert!(d.items[0].message.contains("R2"), "{}", d.items[0].message);
        c.strict_constraints = true;
        assert!(check(&c).has_errors());
    }

    #[test]
    fn missing_paths_are_named() {
        let mut c = parse(&MINIMAL.replace("Cargo.toml", "nope.csv"));
        c.resources = Some("no-such-dir".into());
        let msgs: Vec<String> = check(&c).errors().map(|d| d.message.clone()).collect();
        assert!(msgs.iter().any(|m| m.contains("nope.csv")), "{msgs:?}");
        if std::env::var_os(lexicon::RESOURCES_ENV).is_none() {
            assert!(msgs.iter().any(|m| m.contains("no-such-dir")), "{msgs:?}");
        }
    }

    #[test]
    fn overrides_replace_lists() {
        let mut c = parse(MINIMAL);
        c.apply(&Overrides {
            ensemble: Some(EnsembleKind::Bagging),
            no_spell: true,
            seed: Some(3),
            ..Default::default()
        });
        assert!(c.models.is_empty());
        assert_eq!(c.ensembles.len(), 1);
        assert_eq!(c.ensembles[0].k, Some(15));
        assert!(!c.spell_correct);
        assert_eq!(c.seed, 3);
        assert!(!check(&c).has_errors());
    }

    #[test]
    fn digest_tracks_content() {
        let a = parse(MINIMAL);
        let mut b = a.clone();
        assert_eq!(a.digest(), b.digest());
        b.output_dir = Some("elsewhere".into());
        assert_eq!(a.digest(), b.digest());
        b.seed = 8;
        assert_ne!(a.digest(), b.digest());
    }
}

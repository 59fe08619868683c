//! The experiment grid: load, binarize, combine and split once, then
//! preprocess, vectorize, train and evaluate every (sequence, vectorizer,
//! model) cell.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tweetseq_core::corpus::{combine, split, SplitCorpus};
use tweetseq_core::ensemble::{self, EnsembleKind, EnsembleModel};
use tweetseq_core::features::{fit_vocabulary, Vectorizer};
use tweetseq_core::learners::train;
use tweetseq_core::metrics::{confusion, metrics};
use tweetseq_core::pipeline::{run_pipeline, validate_sequence, PipelineOptions};
use tweetseq_core::{
    ClassifierKind, Label, LabeledCorpus, LexiconSet, MetricsReport, Sequence, SparseVector, TrainedModel, Vocabulary,
};

use crate::config::{digest_json, EnsembleConfig, ExperimentConfig};
use crate::model_io::{ModelContainer, SavedModel};
use crate::{datasets, lexicon, Error};

pub const REPORT_SCHEMA: u32 = 1;

/// Seed for one cell: the first eight bytes of SHA-256 over the root seed
/// and the cell id.
pub fn cell_seed(root: u64, cell_id: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(root.to_le_bytes());
    h.update(cell_id.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Base,
    Ensemble,
}

#[derive(Debug, Clone, PartialEq)]
enum CellModel {
    Base(ClassifierKind),
    Ensemble(EnsembleConfig),
}

#[derive(Debug, Clone)]
struct CellPlan {
    id: String,
    sequence: String,
    vectorizer: Vectorizer,
    model: String,
    what: CellModel,
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerClass {
    pub inappropriate: MetricsReport,
    pub normal: MetricsReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CellTiming {
    pub train_ms: u64,
    pub evaluate_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Ok { vocabulary_size: usize, test: MetricsReport, validation: MetricsReport, per_class: PerClass },
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub id: String,
    pub sequence: String,
    pub stages: String,
    pub vectorizer: Vectorizer,
    pub model: String,
    pub family: Family,
    pub seed: u64,
    pub config_digest: String,
    pub outcome: Outcome,
    pub timing: CellTiming,
}

impl CellResult {
    pub fn test_metrics(&self) -> Option<&MetricsReport> {
        match &self.outcome {
            Outcome::Ok { test, .. } => Some(test),
            Outcome::Failed { .. } => None,
        }
    }

    pub fn accuracy(&self) -> Option<f64> {
        self.test_metrics().map(|m| m.accuracy)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub documents: usize,
    pub inappropriate: usize,
    pub normal: usize,
    pub train: usize,
    pub validation: usize,
    pub test: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StepTiming {
    pub ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSummary {
    pub alias: String,
    pub stages: String,
    pub violations: Vec<String>,
    pub timing: StepTiming,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RunTiming {
    pub load_ms: u64,
    pub preprocess_ms: u64,
    pub vectorize_ms: u64,
    pub cells_ms: u64,
    pub total_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub tool: String,
    pub config_digest: String,
    pub seed: u64,
    pub spell_correct: bool,
    pub strict_constraints: bool,
    pub ok_cells: usize,
    pub failed_cells: usize,
    /// Failures that stopped every cell, such as an unreadable dataset.
    pub errors: Vec<String>,
    pub corpus: Option<CorpusSummary>,
    pub sequences: Vec<SequenceSummary>,
    pub cells: Vec<CellResult>,
    pub timing: RunTiming,
}

impl RunReport {
    pub fn all_failed(&self) -> bool {
        self.ok_cells == 0
    }

    pub fn cell(&self, id: &str) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.id == id)
    }
}

/// A finished run: the report plus, when `save_models` is set, every fitted model.
pub struct RunOutput {
    pub report: RunReport,
    pub models: Vec<(String, ModelContainer)>,
}

pub fn cell_id(sequence: &str, vectorizer: Vectorizer, model: &str) -> String {
    format!("{sequence}/{vectorizer}/{model}", vectorizer = vectorizer.as_str())
}

fn ensemble_label(e: &EnsembleConfig) -> String {
    let bases: Vec<&str> = e.bases.iter().map(|b| b.as_str()).collect();
    let mut label = format!("{}({})", e.kind, bases.join("+"));
    if let Some(k) = e.k {
        if matches!(e.kind, EnsembleKind::Bagging | EnsembleKind::Adaboost) {
            label.push_str(&format!("x{k}"));
        }
    }
    label
}

fn plan(cfg: &ExperimentConfig) -> Vec<CellPlan> {
    let mut cells = Vec::new();
    let push = |cells: &mut Vec<CellPlan>, sequence: &str, v: Vectorizer, model: String, what: CellModel| {
        let mut id = cell_id(sequence, v, &model);
        let mut n = 2;
        while cells.iter().any(|c: &CellPlan| c.id == id) {
            id = format!("{}#{n}", cell_id(sequence, v, &model));
            n += 1;
        }
        let seed = cell_seed(cfg.seed, &id);
        cells.push(CellPlan { id, sequence: sequence.to_string(), vectorizer: v, model, what, seed });
    };
    for v in &cfg.vectorizers {
        for s in &cfg.sequences {
            for m in &cfg.models {
                push(&mut cells, s, *v, m.as_str().to_string(), CellModel::Base(*m));
            }
        }
        for e in &cfg.ensembles {
            for s in &e.sequences {
                push(&mut cells, s, *v, ensemble_label(e), CellModel::Ensemble(e.clone()));
            }
        }
    }
    cells
}

struct Prepared {
    train: LabeledCorpus,
    validation: LabeledCorpus,
    test: LabeledCorpus,
}

struct Features {
    vocabulary: Vocabulary,
    train: Vec<SparseVector>,
    validation: Vec<SparseVector>,
    test: Vec<SparseVector>,
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn per_class(pred: &[Label], truth: &[Label]) -> tweetseq_core::Result<(MetricsReport, PerClass)> {
    let cm = confusion(pred, truth)?;
    let pos = metrics(&cm);
    Ok((pos, PerClass { inappropriate: pos, normal: metrics(&cm.swapped()) }))
}

enum Fitted {
    Base(TrainedModel),
    Ensemble(EnsembleModel),
}

impl Fitted {
    fn predict_all(&self, x: &[SparseVector]) -> tweetseq_core::Result<Vec<Label>> {
        match self {
            Fitted::Base(m) => m.predict_all(x),
            Fitted::Ensemble(m) => m.predict_all(x),
        }
    }
}

fn run_cell(
    cell: &CellPlan,
    cfg: &ExperimentConfig,
    feats: &Features,
    y: &Labels,
) -> (Outcome, CellTiming, Option<Fitted>) {
    let mut timing = CellTiming::default();
    let t = Instant::now();
    let fitted = match &cell.what {
        CellModel::Base(kind) => {
            train(&cfg.hyperparameters.spec(*kind, cell.seed), &feats.train, &y.train, None).map(Fitted::Base)
        }
        CellModel::Ensemble(e) => {
            ensemble::fit(&e.spec(&cfg.hyperparameters, cell.seed), &feats.train, &y.train).map(Fitted::Ensemble)
        }
    };
    timing.train_ms = ms(t);
    let fitted = match fitted {
        Ok(f) => f,
        Err(e) => return (Outcome::Failed { error: e.to_string() }, timing, None),
    };
    let t = Instant::now();
    let evaluated = (|| {
        let (test, per) = per_class(&fitted.predict_all(&feats.test)?, &y.test)?;
        let (validation, _) = per_class(&fitted.predict_all(&feats.validation)?, &y.validation)?;
        Ok::<_, tweetseq_core::Error>(Outcome::Ok {
            vocabulary_size: feats.vocabulary.len(),
            test,
            validation,
            per_class: per,
        })
    })();
    timing.evaluate_ms = ms(t);
    match evaluated {
        Ok(o) => (o, timing, Some(fitted)),
        Err(e) => (Outcome::Failed { error: e.to_string() }, timing, None),
    }
}

struct Labels {
    train: Vec<Label>,
    validation: Vec<Label>,
    test: Vec<Label>,
}

fn load_corpus(cfg: &ExperimentConfig) -> Result<SplitCorpus, Error> {
    let mut parts = Vec::with_capacity(cfg.datasets.len());
    for ds in &cfg.datasets {
        parts.push(datasets::load_labeled(&cfg.resolve(&ds.path), ds.format)?);
    }
    Ok(split(&combine(&parts), cfg.split.ratios, cfg.seed)?)
}

fn failed_report(cfg: &ExperimentConfig, cells: &[CellPlan], digest: &str, error: String) -> RunReport {
    let results = cells
        .iter()
        .map(|c| CellResult {
            id: c.id.clone(),
            sequence: c.sequence.clone(),
            stages: Sequence::resolve(&c.sequence).map(|s| s.to_roman_list()).unwrap_or_default(),
            vectorizer: c.vectorizer,
            model: c.model.clone(),
            family: family(&c.what),
            seed: c.seed,
            config_digest: String::new(),
            outcome: Outcome::Failed { error: error.clone() },
            timing: CellTiming::default(),
        })
        .collect::<Vec<_>>();
    RunReport {
        schema: REPORT_SCHEMA,
        tool: tool(),
        config_digest: digest.to_string(),
        seed: cfg.seed,
        spell_correct: cfg.spell_correct,
        strict_constraints: cfg.strict_constraints,
        ok_cells: 0,
        failed_cells: results.len(),
        errors: vec![error],
        corpus: None,
        sequences: Vec::new(),
        cells: results,
        timing: RunTiming::default(),
    }
}

fn tool() -> String {
    format!("tweetseq {}", env!("CARGO_PKG_VERSION"))
}

fn family(m: &CellModel) -> Family {
    match m {
        CellModel::Base(_) => Family::Base,
        CellModel::Ensemble(_) => Family::Ensemble,
    }
}

/// What a cell's digest covers.
#[derive(Serialize)]
struct CellConfig<'a> {
    config: &'a str,
    cell: &'a str,
    stages: &'a str,
    vectorizer: Vectorizer,
    seed: u64,
    base: Option<tweetseq_core::ClassifierSpec>,
    ensemble: Option<tweetseq_core::ensemble::EnsembleSpec>,
}

/// Runs the whole grid. Failures of individual cells are recorded in the
/// report; a failure that precedes every cell (unreadable data, bad
/// lexicons) yields a report whose cells all failed.
pub fn run_experiment(cfg: &ExperimentConfig) -> RunOutput {
    let started = Instant::now();
    let digest = cfg.digest();
    let cells = plan(cfg);
    let t = Instant::now();
    let loaded = lexicon::load(cfg.resource_dir().as_deref()).and_then(|lex| Ok((lex, load_corpus(cfg)?)));
    let load_ms = ms(t);
    let (lex, corpus) = match loaded {
        Ok(v) => v,
        Err(e) => {
            let mut report = failed_report(cfg, &cells, &digest, e.to_string());
            report.timing.load_ms = load_ms;
            report.timing.total_ms = ms(started);
            return RunOutput { report, models: Vec::new() };
        }
    };
    let y = Labels { train: corpus.train.labels(), validation: corpus.validation.labels(), test: corpus.test.labels() };

    // Distinct sequences in first-use order.
    let mut aliases: Vec<&str> = Vec::new();
    for c in &cells {
        if !aliases.contains(&c.sequence.as_str()) {
            aliases.push(&c.sequence);
        }
    }
    let opts = PipelineOptions { spell_correct: cfg.spell_correct };
    let t = Instant::now();
    let prepared: Vec<(SequenceSummary, Result<Prepared, String>)> =
        aliases.par_iter().map(|a| prepare(a, cfg, &corpus, &lex, opts)).collect();
    let preprocess_ms = ms(t);

    let t = Instant::now();
    let mut keys: Vec<(usize, Vectorizer)> = Vec::new();
    for c in &cells {
        let k = (aliases.iter().position(|a| *a == c.sequence).expect("alias collected"), c.vectorizer);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let features: BTreeMap<(usize, Vectorizer), Result<Features, String>> = keys
        .par_iter()
        .map(|&(i, v)| {
            let f = match &prepared[i].1 {
                Ok(p) => vectorize(p, v, cfg).map_err(|e| e.to_string()),
                Err(e) => Err(e.clone()),
            };
            ((i, v), f)
        })
        .collect();
    let vectorize_ms = ms(t);

    let t = Instant::now();
    let run_all = || {
        cells
            .par_iter()
            .map(|c| {
                let i = aliases.iter().position(|a| *a == c.sequence).expect("alias collected");
                let stages = prepared[i].0.stages.clone();
                let (outcome, timing, fitted) = match &features[&(i, c.vectorizer)] {
                    Ok(f) => run_cell(c, cfg, f, &y),
                    Err(e) => (Outcome::Failed { error: e.clone() }, CellTiming::default(), None),
                };
                let (base, ens) = match &c.what {
                    CellModel::Base(k) => (Some(cfg.hyperparameters.spec(*k, c.seed)), None),
                    CellModel::Ensemble(e) => (None, Some(e.spec(&cfg.hyperparameters, c.seed))),
                };
                let config_digest = digest_json(&CellConfig {
                    config: &digest,
                    cell: &c.id,
                    stages: &stages,
                    vectorizer: c.vectorizer,
                    seed: c.seed,
                    base,
                    ensemble: ens,
                });
                let saved = match (cfg.save_models, fitted, &features[&(i, c.vectorizer)]) {
                    (true, Some(fitted), Ok(f)) => Some(ModelContainer::new(
                        Some(stages.clone()),
                        Some(c.vectorizer),
                        Some(f.vocabulary.clone()),
                        match fitted {
                            Fitted::Base(m) => SavedModel::Base(m),
                            Fitted::Ensemble(m) => SavedModel::Ensemble(m),
                        },
                    )),
                    _ => None,
                };
                let result = CellResult {
                    id: c.id.clone(),
                    sequence: c.sequence.clone(),
                    stages,
                    vectorizer: c.vectorizer,
                    model: c.model.clone(),
                    family: family(&c.what),
                    seed: c.seed,
                    config_digest,
                    outcome,
                    timing,
                };
                (result, saved)
            })
            .collect::<Vec<_>>()
    };
    let done = match rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build() {
        Ok(pool) => pool.install(run_all),
        Err(_) => run_all(),
    };
    let cells_ms = ms(t);

    let mut results = Vec::with_capacity(done.len());
    let mut models = Vec::new();
    for (r, m) in done {
        if let Some(m) = m {
            models.push((r.id.clone(), m));
        }
        results.push(r);
    }
    let ok_cells = results.iter().filter(|r| matches!(r.outcome, Outcome::Ok { .. })).count();
    let counts = combine_counts(&corpus);
    RunOutput {
        report: RunReport {
            schema: REPORT_SCHEMA,
            tool: tool(),
            config_digest: digest,
            seed: cfg.seed,
            spell_correct: cfg.spell_correct,
            strict_constraints: cfg.strict_constraints,
            ok_cells,
            failed_cells: results.len() - ok_cells,
            errors: Vec::new(),
            corpus: Some(counts),
            sequences: prepared.into_iter().map(|p| p.0).collect(),
            cells: results,
            timing: RunTiming { load_ms, preprocess_ms, vectorize_ms, cells_ms, total_ms: ms(started) },
        },
        models,
    }
}

fn combine_counts(s: &SplitCorpus) -> CorpusSummary {
    let parts = [&s.train, &s.validation, &s.test];
    let inappropriate = parts.iter().map(|p| p.class_counts().inappropriate).sum();
    let normal = parts.iter().map(|p| p.class_counts().normal).sum();
    CorpusSummary {
        documents: inappropriate + normal,
        inappropriate,
        normal,
        train: s.train.len(),
        validation: s.validation.len(),
        test: s.test.len(),
    }
}

fn prepare(
    alias: &str,
    cfg: &ExperimentConfig,
    corpus: &SplitCorpus,
    lex: &LexiconSet,
    opts: PipelineOptions,
) -> (SequenceSummary, Result<Prepared, String>) {
    let t = Instant::now();
    let seq = match Sequence::resolve(alias) {
        Ok(s) => s,
        Err(e) => {
            let summary = SequenceSummary {
                alias: alias.into(),
                stages: String::new(),
                violations: Vec::new(),
                timing: StepTiming::default(),
            };
            return (summary, Err(e.to_string()));
        }
    };
    let report = validate_sequence(&seq);
    let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    let mut summary =
        SequenceSummary { alias: alias.into(), stages: seq.to_roman_list(), violations, timing: StepTiming::default() };
    if cfg.strict_constraints {
        if let Err(e) = report.into_result() {
            return (summary, Err(e.to_string()));
        }
    }
    let parts = [&corpus.train, &corpus.validation, &corpus.test];
    let mut out: Vec<LabeledCorpus> = parts.par_iter().map(|c| run_pipeline(&seq, c, lex, opts)).collect();
    summary.timing.ms = ms(t);
    let test = out.pop().expect("three parts");
    let validation = out.pop().expect("three parts");
    let train = out.pop().expect("three parts");
    (summary, Ok(Prepared { train, validation, test }))
}

/// Fits the vocabulary on the training texts only, then vectorizes all three parts.
fn vectorize(p: &Prepared, v: Vectorizer, cfg: &ExperimentConfig) -> tweetseq_core::Result<Features> {
    let vocabulary = fit_vocabulary(p.train.texts(), cfg.features.min_df, cfg.features.max_features)?;
    let tx = |c: &LabeledCorpus| c.texts().map(|t| v.transform(t, &vocabulary)).collect::<Vec<_>>();
    let (train, validation, test) = (tx(&p.train), tx(&p.validation), tx(&p.test));
    Ok(Features { vocabulary, train, validation, test })
}

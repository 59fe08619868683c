use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A record could not be parsed; `line` is 1-based.
    MalformedRow {
        line: usize,
        reason: String,
    },
    UnknownLabel {
        line: usize,
        label: String,
        permitted: Vec<&'static str>,
    },
    UnmappedLabel {
        label: String,
        source: &'static str,
    },
    InvalidRatios(String),
    /// Stratified splitting or fold assignment needs more documents of a class.
    ClassTooSmall {
        label: &'static str,
        count: usize,
        parts: usize,
    },
    UnknownAlias {
        alias: String,
        valid: Vec<&'static str>,
    },
    InvalidSequence(String),
    ConstraintViolation(String),
    EmptyVocabulary,
    MalformedLexicon {
        line: usize,
        reason: String,
    },
    MalformedVocabulary {
        line: usize,
        reason: String,
    },
    SingleClass,
    EmptyTrainingSet,
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    InvalidWeights(String),
    InvalidHyperparameter(String),
    /// Bootstrap resampling kept producing single-class samples.
    DegenerateBootstrap {
        attempts: usize,
    },
    NoUsefulRound,
    EmptyEnsemble,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MalformedRow { line, reason } => {
                write!(f, "malformed row at line {line}: {reason}")
            }
            Error::UnknownLabel { line, label, permitted } => {
                write!(f, "unknown label {label:?} at line {line}; permitted labels: {}", permitted.join(", "))
            }
            Error::UnmappedLabel { label, source } => {
                write!(f, "label {label:?} has no binary mapping for source {source}")
            }
            Error::InvalidRatios(msg) => write!(f, "invalid split ratios: {msg}"),
            Error::ClassTooSmall { label, count, parts } => {
                write!(f, "class {label} has {count} documents, fewer than the {parts} partitions requested")
            }
            Error::UnknownAlias { alias, valid } => {
                write!(f, "unknown sequence alias {alias:?}; valid aliases: {}", valid.join(", "))
            }
            Error::InvalidSequence(msg) => write!(f, "invalid sequence: {msg}"),
            Error::ConstraintViolation(msg) => {
                write!(f, "sequence violates ordering constraints: {msg}")
            }
            Error::EmptyVocabulary => {
                write!(f, "vocabulary is empty after applying min_df/max_features")
            }
            Error::MalformedLexicon { line, reason } => {
                write!(f, "malformed lexicon line {line}: {reason}")
            }
            Error::MalformedVocabulary { line, reason } => {
                write!(f, "malformed vocabulary line {line}: {reason}")
            }
            Error::SingleClass => write!(f, "training data contains a single class"),
            Error::EmptyTrainingSet => write!(f, "training data needs at least two examples"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::InvalidWeights(msg) => write!(f, "invalid sample weights: {msg}"),
            Error::InvalidHyperparameter(msg) => write!(f, "invalid hyperparameter: {msg}"),
            Error::DegenerateBootstrap { attempts } => {
                write!(f, "bootstrap sample contained a single class after {attempts} attempts")
            }
            Error::NoUsefulRound => write!(f, "no weak learner beat chance"),
            Error::EmptyEnsemble => write!(f, "ensemble has no members"),
        }
    }
}

impl core::error::Error for Error {}

//! Versioned JSON container for fitted models.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tweetseq_core::ensemble::EnsembleModel;
use tweetseq_core::features::Vectorizer;
use tweetseq_core::pipeline::{run_text, PipelineOptions};
use tweetseq_core::{Label, LexiconSet, Sequence, TrainedModel, Vocabulary};

use crate::report::write_atomic;
use crate::Error;

pub const MODEL_FORMAT: &str = "tweetseq-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "model", rename_all = "lowercase")]
pub enum SavedModel {
    Base(TrainedModel),
    Ensemble(EnsembleModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelContainer {
    pub format: String,
    pub version: u32,
    /// Roman-numeral stage list the training texts went through.
    pub sequence: Option<String>,
    pub vectorizer: Option<Vectorizer>,
    pub vocabulary: Option<Vocabulary>,
    pub model: SavedModel,
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
}

impl ModelContainer {
    pub fn new(
        sequence: Option<String>,
        vectorizer: Option<Vectorizer>,
        vocabulary: Option<Vocabulary>,
        model: SavedModel,
    ) -> Self {
        ModelContainer { format: MODEL_FORMAT.into(), version: MODEL_VERSION, sequence, vectorizer, vocabulary, model }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("models serialize")
    }

    pub fn save(&self, path: &Path) -> Result<(), Error> {
        write_atomic(path, self.to_json().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let json = |source| Error::Json { path: path.to_path_buf(), source };
        let header: Header = serde_json::from_str(&text).map_err(json)?;
        if header.format != MODEL_FORMAT {
            return Err(Error::Config {
                path: path.to_path_buf(),
                message: format!("not a model container: {:?}", header.format),
            });
        }
        if header.version != MODEL_VERSION {
            return Err(Error::ModelVersion {
                path: path.to_path_buf(),
                found: header.version,
                expected: MODEL_VERSION,
            });
        }
        serde_json::from_str(&text).map_err(json)
    }

    /// Preprocesses, vectorizes and classifies one raw text. Needs the
    /// sequence, vectorizer and vocabulary to be present.
    pub fn predict_text(&self, text: &str, lex: &LexiconSet, opts: PipelineOptions) -> Result<Label, Error> {
        let missing = |what: &str| tweetseq_core::Error::InvalidHyperparameter(format!("container has no {what}"));
        let seq = Sequence::parse_roman_list(self.sequence.as_deref().ok_or_else(|| missing("sequence"))?)?;
        let vocab = self.vocabulary.as_ref().ok_or_else(|| missing("vocabulary"))?;
        let v = self.vectorizer.ok_or_else(|| missing("vectorizer"))?;
        let x = v.transform(&run_text(&seq, text, lex, opts), vocab);
        Ok(match &self.model {
            SavedModel::Base(m) => m.predict(&x)?,
            SavedModel::Ensemble(m) => m.predict(&x)?,
        })
    }
}

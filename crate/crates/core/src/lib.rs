//! Order-aware tweet normalization, sparse bag-of-words features, from-scratch
//! base classifiers and bagging / boosting / voting / stacking ensembles for
//! binary hate-speech detection.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, dataset adapters,
//! the experiment harness and the CLI live in the companion `tweetseq` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod corpus;
pub mod ensemble;
pub mod error;
pub mod features;
pub mod learners;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod textprep;

pub use corpus::{Document, Label, LabeledCorpus, RawCorpus, RawRecord, Source, SplitCorpus};
pub use error::{Error, Result};
pub use features::{SparseVector, Vocabulary};
pub use learners::{ClassifierKind, ClassifierSpec, TrainedModel};
pub use metrics::{ConfusionMatrix, MetricsReport};
pub use pipeline::{ConstraintReport, Sequence};
pub use textprep::{LexiconSet, StageId};

//! Dataset loaders, lexicon files, experiment configuration, the grid
//! harness and report writers built on `tweetseq-core`.

pub mod config;
pub mod datasets;
mod error;
pub mod harness;
pub mod lexicon;
pub mod model_io;
pub mod report;

pub use config::{validate_config, Diagnostics, ExperimentConfig, Overrides};
pub use datasets::DatasetFormat;
pub use error::Error;
pub use harness::{run_experiment, CellResult, Outcome, RunOutput, RunReport};
pub use model_io::ModelContainer;

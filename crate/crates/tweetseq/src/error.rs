use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Dataset { path: PathBuf, source: tweetseq_core::Error },
    #[error("lexicons in {dir}: {source}")]
    Lexicon { dir: PathBuf, source: tweetseq_core::Error },
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: unsupported model container version {found} (expected {expected})")]
    ModelVersion { path: PathBuf, found: u32, expected: u32 },
    #[error(transparent)]
    Core(#[from] tweetseq_core::Error),
}

impl Error {
    pub fn io(path: &Path, source: io::Error) -> Self {
        Error::Io { path: path.to_path_buf(), source }
    }
}

//! Lexicon files: bundled defaults, a directory on disk, or the directory
//! named by `TWEETSEQ_RESOURCES`.

use std::fs;
use std::path::{Path, PathBuf};

use tweetseq_core::textprep::LexiconSources;
use tweetseq_core::LexiconSet;

use crate::Error;

pub const RESOURCES_ENV: &str = "TWEETSEQ_RESOURCES";

/// File names expected inside a resource directory.
pub const FILES: [&str; 6] =
    ["emoji.tsv", "slang.tsv", "contractions.tsv", "stopwords.txt", "unigrams.tsv", "lemmas.tsv"];

const BUNDLED: [&str; 6] = [
    include_str!("../resources/emoji.tsv"),
    include_str!("../resources/slang.tsv"),
    include_str!("../resources/contractions.tsv"),
    include_str!("../resources/stopwords.txt"),
    include_str!("../resources/unigrams.tsv"),
    include_str!("../resources/lemmas.tsv"),
];

fn build(texts: [&str; 6]) -> tweetseq_core::Result<LexiconSet> {
    LexiconSet::from_sources(LexiconSources {
        emoji: texts[0],
        slang: texts[1],
        contractions: texts[2],
        stopwords: texts[3],
        unigrams: texts[4],
        lemmas: texts[5],
    })
}

/// The lexicons compiled into the binary.
pub fn bundled() -> LexiconSet {
    build(BUNDLED).expect("bundled lexicons are well formed")
}

/// Loads every lexicon file from `dir`.
pub fn load_dir(dir: &Path) -> Result<LexiconSet, Error> {
    let mut texts: Vec<String> = Vec::with_capacity(FILES.len());
    for name in FILES {
        let path = dir.join(name);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        texts.push(text);
    }
    let refs: [&str; 6] = std::array::from_fn(|i| texts[i].as_str());
    build(refs).map_err(|e| Error::Lexicon { dir: dir.to_path_buf(), source: e })
}

/// The lexicon files missing from `dir`.
pub fn missing_files(dir: &Path) -> Vec<PathBuf> {
    FILES.iter().map(|f| dir.join(f)).filter(|p| !p.is_file()).collect()
}

/// Resource directory in effect: the environment override wins over `configured`.
pub fn resource_dir(configured: Option<&Path>) -> Option<PathBuf> {
    match std::env::var_os(RESOURCES_ENV) {
        Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
        _ => configured.map(Path::to_path_buf),
    }
}

/// Loads from the directory in effect, or the bundled set when there is none.
pub fn load(configured: Option<&Path>) -> Result<LexiconSet, Error> {
    match resource_dir(configured) {
        Some(dir) => load_dir(&dir),
        None => Ok(bundled()),
    }
}
